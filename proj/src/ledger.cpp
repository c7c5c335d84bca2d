#include "qlab/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "qlab/error.hpp"
#include "qlab/io.hpp"
#include "qlab/numerics.hpp"
#include "qlab/reality_oracle.hpp"

namespace qlab {
namespace {

constexpr std::string_view kModule = "morphism_ledger";

using nlohmann::json;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string_view to_string(InstanceFilter filter) {
  switch (filter) {
    case InstanceFilter::kAny: return "any";
    case InstanceFilter::kPerfect: return "perfect";
    case InstanceFilter::kUniqueOptimum: return "unique_optimum";
  }
  return "any";
}

bool passes(const PartitionInstance& instance, InstanceFilter filter) {
  if (filter == InstanceFilter::kAny) return true;
  const PartitionSolution solution = brute_force(instance);
  if (filter == InstanceFilter::kPerfect) return solution.is_perfect;
  return solution.optimal_assignments.size() == 2;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_double(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

json gap_fit_to_json(const GapScalingFit& fit) {
  json samples = json::array();
  for (const auto& [n, g] : fit.samples) samples.push_back({n, g});
  return {{"median_min_gap", samples},
          {"exponential", {{"c", fit.c}, {"log_amplitude", fit.log_amplitude}, {"residual", fit.log_residual}}},
          {"power_law",
           {{"exponent", fit.power_exponent},
            {"log_amplitude", fit.power_log_amplitude},
            {"residual", fit.power_residual}}}};
}

GapScalingFit gap_fit_from_json(const json& j) {
  GapScalingFit fit;
  for (const auto& s : j.at("median_min_gap")) fit.samples.emplace_back(s.at(0).get<int>(), s.at(1).get<double>());
  fit.c = j.at("exponential").at("c").get<double>();
  fit.log_amplitude = j.at("exponential").at("log_amplitude").get<double>();
  fit.log_residual = j.at("exponential").at("residual").get<double>();
  fit.power_exponent = j.at("power_law").at("exponent").get<double>();
  fit.power_log_amplitude = j.at("power_law").at("log_amplitude").get<double>();
  fit.power_residual = j.at("power_law").at("residual").get<double>();
  return fit;
}

json cost_to_json(const MorphismCost& c) {
  json j = {{"label", to_string(c.label)}, {"N", c.n}};
  if (c.operation_count) j["operation_count"] = *c.operation_count;
  if (c.threshold_time) j["threshold_time"] = *c.threshold_time;
  j["capped"] = c.capped;
  if (c.label == CostLabel::kTEvolution) {
    j["at_floor"] = c.at_floor;
    j["success"] = c.success;
    j["instance"] = {{"weights", c.weights}};
    j["instance_seed"] = c.instance_seed;
    j["min_gap"] = optional_json(c.min_gap);
    j["criterion_ratio"] = optional_json(c.criterion_ratio);
  }
  return j;
}

MorphismCost cost_from_json(const json& j) {
  MorphismCost c;
  c.label = parse_cost_label(j.at("label").get<std::string>());
  c.n = j.at("N").get<int>();
  if (j.contains("operation_count")) c.operation_count = j.at("operation_count").get<std::uint64_t>();
  c.threshold_time = optional_double(j, "threshold_time");
  c.capped = j.at("capped").get<bool>();
  if (c.label == CostLabel::kTEvolution) {
    c.at_floor = j.at("at_floor").get<bool>();
    c.success = j.at("success").get<double>();
    c.weights = j.at("instance").at("weights").get<std::vector<double>>();
    c.instance_seed = j.at("instance_seed").get<std::uint64_t>();
    c.min_gap = optional_double(j, "min_gap");
    c.criterion_ratio = optional_double(j, "criterion_ratio");
  }
  if (c.operation_count.has_value() == c.threshold_time.has_value()) {
    throw Error(ErrorCode::kParseError, kModule,
                "cost record must carry exactly one of operation_count and threshold_time");
  }
  return c;
}

}  // namespace

std::string_view to_string(CostLabel label) {
  switch (label) {
    case CostLabel::kFFull: return "f_full";
    case CostLabel::kFProduct: return "f_product";
    case CostLabel::kG: return "g";
    case CostLabel::kTEvolution: return "T_evolution";
  }
  return "g";
}

CostLabel parse_cost_label(std::string_view text) {
  for (auto label : {CostLabel::kFFull, CostLabel::kFProduct, CostLabel::kG, CostLabel::kTEvolution}) {
    if (text == to_string(label)) return label;
  }
  throw Error(ErrorCode::kParseError, kModule, "unknown cost label '" + std::string(text) + "'");
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kConsistentWithPoly: return "consistent_with_poly";
    case Verdict::kInconsistentWithPoly: return "inconsistent_with_poly";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Verdict parse_verdict(std::string_view text) {
  for (auto v : {Verdict::kConsistentWithPoly, Verdict::kInconsistentWithPoly, Verdict::kInconclusive}) {
    if (text == to_string(v)) return v;
  }
  throw Error(ErrorCode::kParseError, kModule, "unknown verdict '" + std::string(text) + "'");
}

MorphismCost measure_f(int n, TomographyMode mode) {
  MorphismCost cost;
  cost.label = mode == TomographyMode::kFull ? CostLabel::kFFull : CostLabel::kFProduct;
  cost.n = n;
  cost.operation_count = budget(mode, n).operation_count;
  return cost;
}

MorphismCost measure_g(int n) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, kModule, "g needs N >= 2");
  MorphismCost cost;
  cost.label = CostLabel::kG;
  cost.n = n;
  cost.operation_count = verification_op_count(n);
  return cost;
}

std::uint64_t derive_seed(std::uint64_t base, int n, std::size_t index, std::size_t attempt) {
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ static_cast<std::uint64_t>(n));
  h = splitmix64(h ^ index);
  return splitmix64(h ^ attempt);
}

std::vector<SampledInstance> sample_instances(int n, std::size_t count,
                                              const InstanceEnsemble& ensemble) {
  std::vector<SampledInstance> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    bool found = false;
    for (std::size_t attempt = 0; attempt < ensemble.max_tries && !found; ++attempt) {
      const std::uint64_t seed = derive_seed(ensemble.seed, n, i, attempt);
      PartitionInstance instance =
          generate_instance({ensemble.distribution, n, seed, ensemble.max_weight});
      if (passes(instance, ensemble.filter)) {
        out.push_back({seed, std::move(instance)});
        found = true;
      }
    }
    if (!found) {
      throw Error(ErrorCode::kRejectionSamplingExhausted, kModule,
                  "no " + std::string(to_string(ensemble.filter)) + " instance at N = " +
                      std::to_string(n) + " within " + std::to_string(ensemble.max_tries) + " tries");
    }
  }
  return out;
}

std::vector<MorphismCost> measure_evolution(const EvolutionSpec& spec) {
  if (spec.instances < 5) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "measure_evolution needs >= 5 instances");
  }
  InstanceEnsemble ensemble = spec.ensemble;
  ensemble.filter = InstanceFilter::kPerfect;
  const auto sampled = sample_instances(spec.n, spec.instances, ensemble);
  std::vector<MorphismCost> costs(sampled.size());
  parallel_for(sampled.size(), spec.jobs, [&](std::size_t i) {
    const auto& [seed, instance] = sampled[i];
    const ThresholdResult scan = scan_threshold_time(instance, spec.target, spec.threshold);
    MorphismCost& cost = costs[i];
    cost.label = CostLabel::kTEvolution;
    cost.n = spec.n;
    cost.threshold_time = scan.time;
    cost.capped = scan.capped;
    cost.at_floor = scan.at_floor;
    cost.success = scan.success;
    cost.weights.assign(instance.weights().begin(), instance.weights().end());
    cost.instance_seed = seed;
    if (spec.with_gaps && brute_force(instance).optimal_assignments.size() == 2) {
      GapOptions gap = spec.gap;
      gap.sector = Sector::kFlipSymmetric;
      const GapProfile profile = gap_profile(instance, gap);
      cost.min_gap = profile.min_gap;
      if (profile.min_gap > 0.0) cost.criterion_ratio = criterion_ratio(scan.time, profile.min_gap);
    }
  });
  return costs;
}

Verdict classify(double exp_residual, double poly_residual) {
  if (std::abs(exp_residual - poly_residual) <= 0.1 * std::max(exp_residual, poly_residual)) {
    return Verdict::kInconclusive;
  }
  return exp_residual < poly_residual ? Verdict::kInconsistentWithPoly : Verdict::kConsistentWithPoly;
}

LedgerReport assemble(std::vector<MorphismCost> costs, std::optional<GapScalingFit> gap_fit,
                      nlohmann::json provenance) {
  std::map<int, std::vector<double>> times;
  LedgerReport report;
  for (const auto& c : costs) {
    if (c.label != CostLabel::kTEvolution) continue;
    if (!c.threshold_time) {
      throw Error(ErrorCode::kInvalidArgument, kModule, "T_evolution record without a time");
    }
    times[c.n].push_back(*c.threshold_time);
    if (c.capped) ++report.cap_events;
  }
  if (times.size() < 4) {
    throw Error(ErrorCode::kInsufficientData, kModule,
                "need T_evolution records at >= 4 distinct N, got " + std::to_string(times.size()));
  }
  std::vector<double> ns;
  std::vector<double> log_ns;
  std::vector<double> log_t;
  for (const auto& [n, ts] : times) {
    const double med = median(ts);
    if (!(med > 0.0)) {
      throw Error(ErrorCode::kInsufficientData, kModule,
                  "median threshold time is zero at N = " + std::to_string(n) +
                      " (the sudden quench already meets the target)");
    }
    report.time_fit.medians.emplace_back(n, med);
    ns.push_back(n);
    log_ns.push_back(std::log(static_cast<double>(n)));
    log_t.push_back(std::log(med));
  }
  const LinearFit exp_fit = fit_line(ns, log_t);
  const LinearFit poly_fit = fit_line(log_ns, log_t);
  report.time_fit.exp_rate = exp_fit.slope;
  report.time_fit.exp_log_amplitude = exp_fit.intercept;
  report.time_fit.exp_residual = exp_fit.rms_residual;
  report.time_fit.poly_exponent = poly_fit.slope;
  report.time_fit.poly_log_amplitude = poly_fit.intercept;
  report.time_fit.poly_residual = poly_fit.rms_residual;
  report.verdict = classify(exp_fit.rms_residual, poly_fit.rms_residual);
  report.costs = std::move(costs);
  report.gap_fit = std::move(gap_fit);
  report.provenance = std::move(provenance);
  return report;
}

nlohmann::json report_to_json(const LedgerReport& report) {
  json costs = json::array();
  for (const auto& c : report.costs) costs.push_back(cost_to_json(c));
  json medians = json::array();
  for (const auto& [n, t] : report.time_fit.medians) medians.push_back({n, t});
  const auto& tf = report.time_fit;
  return {{"schema_version", kSchemaVersion},
          {"costs", costs},
          {"gap_fit", report.gap_fit ? gap_fit_to_json(*report.gap_fit) : json(nullptr)},
          {"time_fit",
           {{"median_threshold_time", medians},
            {"exponential", {{"rate", tf.exp_rate}, {"log_amplitude", tf.exp_log_amplitude}, {"residual", tf.exp_residual}}},
            {"polynomial",
             {{"exponent", tf.poly_exponent}, {"log_amplitude", tf.poly_log_amplitude}, {"residual", tf.poly_residual}}}}},
          {"verdict", to_string(report.verdict)},
          {"cap_events", report.cap_events},
          {"provenance", report.provenance}};
}

LedgerReport report_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema_version").get<std::string>() != kSchemaVersion) {
      throw Error(ErrorCode::kParseError, kModule, "unsupported schema_version");
    }
    LedgerReport report;
    for (const auto& c : j.at("costs")) report.costs.push_back(cost_from_json(c));
    if (!j.at("gap_fit").is_null()) report.gap_fit = gap_fit_from_json(j.at("gap_fit"));
    const json& tf = j.at("time_fit");
    for (const auto& m : tf.at("median_threshold_time")) {
      report.time_fit.medians.emplace_back(m.at(0).get<int>(), m.at(1).get<double>());
    }
    report.time_fit.exp_rate = tf.at("exponential").at("rate").get<double>();
    report.time_fit.exp_log_amplitude = tf.at("exponential").at("log_amplitude").get<double>();
    report.time_fit.exp_residual = tf.at("exponential").at("residual").get<double>();
    report.time_fit.poly_exponent = tf.at("polynomial").at("exponent").get<double>();
    report.time_fit.poly_log_amplitude = tf.at("polynomial").at("log_amplitude").get<double>();
    report.time_fit.poly_residual = tf.at("polynomial").at("residual").get<double>();
    report.verdict = parse_verdict(j.at("verdict").get<std::string>());
    report.cap_events = j.at("cap_events").get<std::size_t>();
    report.provenance = j.at("provenance");
    return report;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, kModule, e.what());
  }
}

std::string report_to_csv(const LedgerReport& report) {
  std::ostringstream out;
  out << "label,N,value,capped,schema_version\n";
  for (const auto& c : report.costs) {
    out << to_string(c.label) << ',' << c.n << ',';
    if (c.operation_count) {
      out << *c.operation_count;
    } else {
      out << json(c.threshold_time.value_or(0.0)).dump();
    }
    out << ',' << (c.capped ? "true" : "false") << ',' << kSchemaVersion << '\n';
  }
  return out.str();
}

void emit(const LedgerReport& report, std::string_view format, const std::filesystem::path& path,
          const nlohmann::json& header) {
  std::string content;
  if (format == "json") {
    json j = report_to_json(report);
    for (const auto& [key, value] : header.items()) j[key] = value;
    content = j.dump(2) + "\n";
  } else if (format == "csv") {
    content = report_to_csv(report);
  } else {
    throw Error(ErrorCode::kInvalidArgument, kModule,
                "unknown format '" + std::string(format) + "' (expected csv or json)");
  }
  atomic_write(path, content);
}

LedgerReport run_ledger(const LedgerSpec& spec) {
  if (spec.n_step < 1 || spec.n_min < 2 || spec.n_max < spec.n_min) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "need 2 <= n_min <= n_max and n_step >= 1");
  }
  std::vector<MorphismCost> costs;
  std::map<int, std::vector<double>> gaps;
  for (int n = spec.n_min; n <= spec.n_max; n += spec.n_step) {
    costs.push_back(measure_f(n, TomographyMode::kFull));
    costs.push_back(measure_f(n, TomographyMode::kProduct));
    costs.push_back(measure_g(n));
    EvolutionSpec evo;
    evo.n = n;
    evo.instances = spec.instances;
    evo.target = spec.target;
    evo.ensemble = {spec.distribution, spec.max_weight, spec.seed, InstanceFilter::kPerfect, 10000};
    evo.threshold = spec.threshold;
    evo.with_gaps = true;
    evo.gap = spec.gap;
    evo.jobs = spec.jobs;
    for (auto& c : measure_evolution(evo)) {
      if (c.min_gap) gaps[n].push_back(*c.min_gap);
      costs.push_back(std::move(c));
    }
  }

  json provenance = {
      {"seed", spec.seed},
      {"ensemble",
       {{"distribution", to_string(spec.distribution)},
        {"max_weight", spec.max_weight},
        {"filter", "perfect"},
        {"max_tries", 10000},
        {"n_min", spec.n_min},
        {"n_max", spec.n_max},
        {"n_step", spec.n_step},
        {"instances", spec.instances}}},
      {"target", spec.target},
      {"threshold_scan",
       {{"initial_time", spec.threshold.initial_time},
        {"cap", spec.threshold.cap},
        {"resolution", spec.threshold.resolution}}},
      {"integrator",
       {{"scheme", "exponential midpoint"},
        {"step_rule", "smallest multiple of 16 with K dt^2 / 12 <= error_target"},
        {"error_target", spec.threshold.error_target}}},
      {"gap_profile",
       {{"grid_size", spec.gap.grid_size},
        {"sector", "flip_symmetric"},
        {"refinement", to_string(spec.gap.refinement)},
        {"instances", "perfect partitions with a unique optimum up to the mirror"}}},
      {"verdict_protocol",
       "model comparison of log-median threshold times at the tested N; not an asymptotic statement"}};

  std::optional<GapScalingFit> gap_fit;
  std::vector<std::pair<int, std::vector<double>>> gap_samples(gaps.begin(), gaps.end());
  try {
    gap_fit = fit_gap_scaling(gap_samples);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInsufficientData && e.code() != ErrorCode::kInvalidArgument) throw;
    provenance["gap_fit_skipped"] = e.what();
  }
  return assemble(std::move(costs), std::move(gap_fit), std::move(provenance));
}

}  // namespace qlab
