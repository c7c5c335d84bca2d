#include "qlab/cli.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qlab/adiabatic.hpp"
#include "qlab/error.hpp"
#include "qlab/hamiltonian.hpp"
#include "qlab/io.hpp"
#include "qlab/ledger.hpp"
#include "qlab/reality_oracle.hpp"
#include "qlab/spectral.hpp"
#include "qlab/tomography.hpp"

namespace qlab::cli {
namespace {

using nlohmann::json;

constexpr std::string_view kModule = "cli";
constexpr int kFullTomographyMaxQubits = 8;
constexpr std::size_t kMaxListedAssignments = 64;

bool uses_instance(const std::string& command) {
  return command == "gap-scan" || command == "evolve" || command == "partition";
}

std::string num(double x) { return json(x).dump(); }

std::string plain(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

ExpMethod parse_method(std::string_view text) {
  for (auto m : {ExpMethod::kAuto, ExpMethod::kEigen, ExpMethod::kKrylov}) {
    if (text == to_string(m)) return m;
  }
  throw Error(ErrorCode::kParseError, kModule, "unknown method '" + std::string(text) + "'");
}

std::vector<double> parse_factor_list(const json& factors) {
  // Each factor is [re0, im0, re1, im1]; returns the product amplitudes as re, im pairs.
  std::vector<QubitFactor> list;
  for (const auto& f : factors) {
    const auto v = f.get<std::vector<double>>();
    if (v.size() != 4) throw Error(ErrorCode::kParseError, kModule, "factor needs 4 numbers");
    list.push_back({Complex{v[0], v[1]}, Complex{v[2], v[3]}});
  }
  const QuantumState state = product_state(list);
  std::vector<double> out;
  for (auto a : state.amplitudes()) {
    out.push_back(a.real());
    out.push_back(a.imag());
  }
  return out;
}

void load_state_file(RunConfig& c) {
  const json j = json::parse(read_file(c.state_path));
  if (j.contains("final_state")) {
    c.state_re = j.at("final_state").at("re").get<std::vector<double>>();
    c.state_im = j.at("final_state").at("im").get<std::vector<double>>();
  } else if (j.contains("factors")) {
    const auto flat = parse_factor_list(j.at("factors"));
    c.state_re.clear();
    c.state_im.clear();
    for (std::size_t i = 0; i < flat.size(); i += 2) {
      c.state_re.push_back(flat[i]);
      c.state_im.push_back(flat[i + 1]);
    }
  } else {
    throw Error(ErrorCode::kParseError, kModule, "state file needs \"final_state\" or \"factors\"");
  }
}

QuantumState resolve_state(const RunConfig& c) {
  if (c.random_product > 0) {
    return product_state(random_product_factors(c.random_product, c.seed));
  }
  if (c.state_re.size() != c.state_im.size()) {
    throw Error(ErrorCode::kDimensionMismatch, kModule, "state re/im lengths differ");
  }
  Amplitudes amps(c.state_re.size());
  for (std::size_t i = 0; i < amps.size(); ++i) amps[i] = {c.state_re[i], c.state_im[i]};
  QuantumState state = QuantumState::unnormalized(std::move(amps));
  if (std::abs(state.norm() - 1.0) > 1e-6) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "input state norm deviates from 1 by more than 1e-6");
  }
  return state;
}

json header(const RunConfig& c) {
  return {{"schema_version", kSchemaVersion}, {"tool_version", kToolVersion}, {"config", config_to_json(c)}};
}

std::filesystem::path sidecar(const std::string& out) { return out + ".meta.json"; }

// JSON payloads go to --out; CSV tables go to --out with `meta` beside them.
void write_payload(const RunConfig& c, const json& payload, const std::string& csv_table) {
  if (c.out.empty()) return;
  if (c.format == "csv") {
    atomic_write(c.out, csv_table);
    atomic_write(sidecar(c.out), payload.dump(2) + "\n");
  } else {
    atomic_write(c.out, payload.dump(2) + "\n");
  }
}

json instance_json(const PartitionInstance& inst) {
  return {{"weights", std::vector<double>(inst.weights().begin(), inst.weights().end())}};
}

int run_gap_scan(const RunConfig& c, std::ostream& out) {
  const PartitionInstance inst(c.weights);
  GapOptions opts;
  opts.grid_size = c.grid;
  opts.sector = parse_sector(c.sector);
  opts.refinement = parse_refinement(c.refine);
  const GapProfile p = gap_profile(inst, opts);

  json payload = header(c);
  payload["instance"] = instance_json(inst);
  payload["summary"] = {{"N", p.num_qubits},
                        {"sector", to_string(p.sector)},
                        {"min_gap", p.min_gap},
                        {"argmin_s", p.argmin_s},
                        {"points", p.s_grid.size()}};
  std::ostringstream csv;
  csv << "s,e0,e1,gap\n";
  json rows = json::array();
  for (std::size_t k = 0; k < p.s_grid.size(); ++k) {
    const double gap = p.e1[k] - p.e0[k];
    csv << num(p.s_grid[k]) << ',' << num(p.e0[k]) << ',' << num(p.e1[k]) << ',' << num(gap) << '\n';
    rows.push_back({p.s_grid[k], p.e0[k], p.e1[k], gap});
  }
  if (c.format != "csv") payload["profile"] = rows;
  write_payload(c, payload, csv.str());
  out << "N=" << p.num_qubits << " sector=" << to_string(p.sector) << " min_gap=" << plain(p.min_gap)
      << " argmin_s=" << plain(p.argmin_s) << '\n';
  return 0;
}

int run_evolve(const RunConfig& c, std::ostream& out) {
  const PartitionInstance inst(c.weights);
  const std::size_t steps = c.steps > 0 ? c.steps : default_steps(inst, c.time, c.error_target);
  PropagationOptions opts;
  opts.method = parse_method(c.method);
  const EvolutionResult r = propagate(inst, ScheduleSpec(c.time, steps), c.seed, opts);

  json payload = header(c);
  payload["instance"] = instance_json(inst);
  payload["T"] = r.total_time;
  payload["steps"] = r.steps;
  payload["success_probability"] = r.success_probability;
  payload["norm_drift"] = r.norm_drift;
  payload["valid"] = r.valid;
  payload["error_estimate"] = r.error_estimate;
  std::vector<double> re;
  std::vector<double> im;
  for (auto a : r.final_state.amplitudes()) {
    re.push_back(a.real());
    im.push_back(a.imag());
  }
  payload["final_state"] = {{"re", re}, {"im", im}};
  std::ostringstream csv;
  csv << "s,overlap\n";
  json trace = json::array();
  for (const auto& [s, overlap] : r.ground_overlap_trace) {
    csv << num(s) << ',' << num(overlap) << '\n';
    trace.push_back({s, overlap});
  }
  if (c.format != "csv") payload["trace"] = trace;
  write_payload(c, payload, csv.str());
  out << "success_probability=" << plain(r.success_probability) << " norm_drift=" << plain(r.norm_drift)
      << " steps=" << r.steps << '\n';
  return 0;
}

int run_tomo(const RunConfig& c, std::ostream& out) {
  const QuantumState state = resolve_state(c);
  const TomographyMode mode = parse_tomography_mode(c.mode);
  const int n = state.num_qubits();
  std::vector<MeasurementRecord> records;
  double fid = 0.0;
  json payload = header(c);
  if (mode == TomographyMode::kProduct) {
    const auto triples = measure_product(state, c.shots, c.seed);
    for (const auto& t : triples) records.insert(records.end(), t.begin(), t.end());
    fid = fidelity(state, reconstruct_product_state(triples));
  } else {
    if (n > kFullTomographyMaxQubits) {
      throw Error(ErrorCode::kCapExceeded, kModule,
                  "full tomography is capped at " + std::to_string(kFullTomographyMaxQubits) + " qubits");
    }
    records = measure_full(state, c.shots, c.seed, c.jobs);
    std::map<PauliString, double> expectations;
    for (const auto& r : records) expectations.emplace(r.observable, r.estimate);
    const Eigen::MatrixXcd rho = full_state_reconstruct(expectations, n);
    const Eigen::Map<const Eigen::VectorXcd> psi(state.amplitudes().data(),
                                                 static_cast<Eigen::Index>(state.dimension()));
    fid = (psi.adjoint() * rho * psi)(0, 0).real();
    payload["min_eigenvalue"] = min_eigenvalue(rho);
  }
  payload["mode"] = to_string(mode);
  payload["num_qubits"] = n;
  payload["operation_count"] = budget(mode, n).operation_count;
  payload["shots"] = c.shots;
  payload["fidelity"] = fid;
  std::ostringstream csv;
  csv << "observable,shots,count_plus,estimate\n";
  json list = json::array();
  for (const auto& r : records) {
    csv << r.observable.str() << ',' << r.shots << ',' << r.count_plus << ',' << num(r.estimate) << '\n';
    list.push_back({{"observable", r.observable.str()},
                    {"shots", r.shots},
                    {"count_plus", r.count_plus},
                    {"estimate", r.estimate}});
  }
  if (c.format != "csv") payload["records"] = list;
  write_payload(c, payload, csv.str());
  out << "mode=" << to_string(mode) << " operation_count=" << budget(mode, n).operation_count
      << " fidelity=" << plain(fid) << '\n';
  return 0;
}

int run_partition(const RunConfig& c, std::ostream& out) {
  const PartitionInstance inst(c.weights);
  const PartitionSolution sol = brute_force(inst, c.jobs);
  json payload = header(c);
  payload["instance"] = instance_json(inst);
  payload["min_value"] = sol.min_value;
  payload["is_perfect"] = sol.is_perfect;
  payload["num_optimal"] = sol.optimal_assignments.size();
  json list = json::array();
  std::ostringstream csv;
  csv << "basis_index,assignment\n";
  for (std::size_t k = 0; k < sol.optimal_assignments.size() && k < kMaxListedAssignments; ++k) {
    const auto& a = sol.optimal_assignments[k];
    list.push_back(a.values);
    csv << a.basis_index() << ',';
    for (int y : a.values) csv << (y > 0 ? '+' : '-');
    csv << '\n';
  }
  payload["assignments"] = list;
  write_payload(c, payload, csv.str());
  out << "min_value=" << plain(sol.min_value) << " perfect=" << (sol.is_perfect ? "true" : "false") << '\n';
  return 0;
}

int run_ledger_command(const RunConfig& c, std::ostream& out) {
  LedgerSpec spec;
  spec.n_min = c.n_min;
  spec.n_max = c.n_max;
  spec.n_step = c.n_step;
  spec.instances = c.instances;
  spec.target = c.target;
  spec.seed = c.seed;
  spec.distribution = parse_distribution(c.generator);
  spec.max_weight = c.max_weight;
  spec.threshold.initial_time = c.t0;
  spec.threshold.cap = c.cap;
  spec.threshold.error_target = c.error_target;
  spec.gap.grid_size = c.grid;
  spec.gap.refinement = parse_refinement(c.refine);
  spec.jobs = c.jobs;
  const LedgerReport report = run_ledger(spec);
  if (!c.out.empty()) {
    json extra = header(c);
    extra.erase("schema_version");
    emit(report, c.format, c.out, extra);
    if (c.format == "csv") {
      json meta = report_to_json(report);
      for (const auto& [key, value] : extra.items()) meta[key] = value;
      atomic_write(sidecar(c.out), meta.dump(2) + "\n");
    }
  }
  out << "verdict=" << to_string(report.verdict) << " cap_events=" << report.cap_events
      << " N=" << c.n_min << ".." << c.n_max << '\n';
  return 0;
}

int run_replay(const RunConfig& c, std::ostream& out) {
  json j;
  try {
    j = json::parse(read_file(c.from));
  } catch (const json::exception&) {
    j = json::parse(read_file(sidecar(c.from)));
  }
  if (!j.contains("config")) {
    throw Error(ErrorCode::kParseError, kModule, c.from + " carries no embedded config");
  }
  RunConfig replayed = config_from_json(j.at("config"));
  replayed.out = c.out;
  replayed.jobs = c.jobs;
  return run(replayed, out);
}

struct Flags {
  std::string instance;
  std::string gen;
  std::string format;
};

void add_instance_flags(CLI::App* sub, Flags& f, RunConfig& c) {
  auto* inst = sub->add_option("--instance", f.instance, "Instance file (JSON {\"weights\": [...]} or one weight per line)");
  auto* gen = sub->add_option("--gen", f.gen, "Generate the instance: uniform-int or uniform-real")
                  ->check(CLI::IsMember({"uniform-int", "uniform-real"}));
  auto* n = sub->add_option("--n", c.n, "Number of weights for --gen");
  sub->add_option("--max-weight", c.max_weight, "Largest uniform-int weight (0 = 2^N)");
  inst->excludes(gen);
  gen->needs(n);
}

void add_common_flags(CLI::App* sub, Flags& f, RunConfig& c) {
  sub->add_option("--seed", c.seed, "Random seed");
  sub->add_option("--out", c.out, "Output path (nothing is written when empty)");
  sub->add_option("--format", f.format, "Output format: csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--jobs", c.jobs, "Worker threads (0 = available parallelism)");
}

}  // namespace

RunConfig parse_args(int argc, const char* const* argv) {
  RunConfig c;
  std::map<std::string, Flags> flags;
  CLI::App app{"Adiabatic number-partitioning laboratory", "qlab"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string(kToolVersion));

  auto* gap = app.add_subcommand("gap-scan", "Lowest two levels of H(s) over a grid in s");
  flags["gap-scan"].format = "csv";
  add_instance_flags(gap, flags["gap-scan"], c);
  add_common_flags(gap, flags["gap-scan"], c);
  gap->add_option("--grid", c.grid, "Uniform grid points in s (>= 3)");
  gap->add_option("--sector", c.sector, "full, flip_symmetric or sym")
      ->check(CLI::IsMember({"full", "flip_symmetric", "sym"}));
  gap->add_option("--refine", c.refine, "Minimum refinement: none, halving or brent")
      ->check(CLI::IsMember({"none", "halving", "brent"}));

  auto* evolve = app.add_subcommand("evolve", "Adiabatic evolution from the transverse-field ground state");
  flags["evolve"].format = "json";
  add_instance_flags(evolve, flags["evolve"], c);
  add_common_flags(evolve, flags["evolve"], c);
  evolve->add_option("--time", c.time, "Total evolution time T (0 = sudden quench)");
  evolve->add_option("--steps", c.steps, "Midpoint steps (0 = chosen from --error-target)");
  evolve->add_option("--error-target", c.error_target, "Midpoint error estimate used to pick steps");
  evolve->add_option("--method", c.method, "Step exponential: auto, eigen or krylov")
      ->check(CLI::IsMember({"auto", "eigen", "krylov"}));

  auto* tomo = app.add_subcommand("tomo", "Simulated Pauli tomography of a state");
  flags["tomo"].format = "json";
  add_common_flags(tomo, flags["tomo"], c);
  auto* state = tomo->add_option("--state", c.state_path,
                                 "State file: evolve output or {\"factors\": [[re0, im0, re1, im1], ...]}");
  auto* random = tomo->add_option("--random-product", c.random_product, "Random product state on this many qubits");
  state->excludes(random);
  tomo->add_option("--mode", c.mode, "full or product")->check(CLI::IsMember({"full", "product"}));
  tomo->add_option("--shots", c.shots, "Shots per measurement setting")->check(CLI::PositiveNumber);

  auto* partition = app.add_subcommand("partition", "Exact number-partitioning optimum by enumeration");
  flags["partition"].format = "json";
  add_instance_flags(partition, flags["partition"], c);
  add_common_flags(partition, flags["partition"], c);

  auto* ledger = app.add_subcommand("ledger", "Tomography, verification and evolution costs across N");
  flags["ledger"].format = "json";
  flags["ledger"].gen = "uniform-int";
  add_common_flags(ledger, flags["ledger"], c);
  ledger->add_option("--gen", flags["ledger"].gen, "Weight distribution: uniform-int or uniform-real")
      ->check(CLI::IsMember({"uniform-int", "uniform-real"}));
  ledger->add_option("--max-weight", c.max_weight, "Largest uniform-int weight (0 = 2^N)");
  ledger->add_option("--n-min", c.n_min, "Smallest N");
  ledger->add_option("--n-max", c.n_max, "Largest N");
  ledger->add_option("--n-step", c.n_step, "Step in N");
  ledger->add_option("--instances", c.instances, "Perfect-partition instances per N (>= 5)");
  ledger->add_option("--target", c.target, "Success probability defining the threshold time");
  ledger->add_option("--cap", c.cap, "Largest scanned evolution time");
  ledger->add_option("--t0", c.t0, "First scanned evolution time");
  ledger->add_option("--error-target", c.error_target, "Midpoint error estimate used to pick steps");
  ledger->add_option("--grid", c.grid, "Gap-profile grid points");
  ledger->add_option("--refine", c.refine, "Gap minimum refinement: none, halving or brent")
      ->check(CLI::IsMember({"none", "halving", "brent"}));

  auto* replay = app.add_subcommand("replay", "Re-run the config embedded in an output file");
  replay->add_option("--from", c.from, "Output file (or CSV with its .meta.json sidecar)")->required();
  replay->add_option("--out", c.out, "Output path");
  replay->add_option("--jobs", c.jobs, "Worker threads (0 = available parallelism)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream sout;
    std::ostringstream serr;
    const int code = app.exit(e, sout, serr);
    throw UsageError{code == 0 ? 0 : 2, sout.str() + serr.str()};
  }

  c.command = app.get_subcommands().front()->get_name();
  if (flags.contains(c.command)) {
    const Flags& f = flags[c.command];
    c.format = f.format;
    if (c.command == "ledger") c.generator = f.gen;
    if (uses_instance(c.command)) {
      if (!f.instance.empty()) {
        c.instance_path = f.instance;
        try {
          const PartitionInstance inst = load_instance(f.instance);
          c.weights.assign(inst.weights().begin(), inst.weights().end());
        } catch (const Error& e) {
          throw UsageError{2, std::string("--instance: ") + e.what() + "\n"};
        }
      } else if (!f.gen.empty()) {
        c.generator = f.gen;
        try {
          const PartitionInstance inst =
              generate_instance({parse_distribution(f.gen), c.n, c.seed, c.max_weight});
          c.weights.assign(inst.weights().begin(), inst.weights().end());
        } catch (const Error& e) {
          throw UsageError{2, std::string("--gen/--n: ") + e.what() + "\n"};
        }
      } else {
        throw UsageError{2, c.command + ": one of --instance or --gen is required\n"};
      }
    }
  }
  if (c.command == "gap-scan") c.sector = std::string(to_string(parse_sector(c.sector)));
  if (c.command == "tomo") {
    if (c.state_path.empty() && c.random_product <= 0) {
      throw UsageError{2, "tomo: one of --state or --random-product is required\n"};
    }
    if (!c.state_path.empty()) {
      try {
        load_state_file(c);
      } catch (const std::exception& e) {
        throw UsageError{2, std::string("--state: ") + e.what() + "\n"};
      }
    }
  }
  return c;
}

nlohmann::json config_to_json(const RunConfig& c) {
  json j = {{"command", c.command}};
  if (c.command == "replay") {
    j["from"] = c.from;
    return j;
  }
  j["seed"] = c.seed;
  j["format"] = c.format;
  if (uses_instance(c.command)) {
    j["instance_path"] = c.instance_path;
    j["generator"] = c.generator;
    j["n"] = c.n;
    j["max_weight"] = c.max_weight;
    j["weights"] = c.weights;
  }
  if (c.command == "gap-scan") {
    j["grid"] = c.grid;
    j["sector"] = c.sector;
    j["refine"] = c.refine;
  } else if (c.command == "evolve") {
    j["time"] = c.time;
    j["steps"] = c.steps;
    j["error_target"] = c.error_target;
    j["method"] = c.method;
  } else if (c.command == "tomo") {
    j["state_path"] = c.state_path;
    j["random_product"] = c.random_product;
    j["mode"] = c.mode;
    j["shots"] = c.shots;
    j["state_re"] = c.state_re;
    j["state_im"] = c.state_im;
  } else if (c.command == "ledger") {
    j["generator"] = c.generator;
    j["max_weight"] = c.max_weight;
    j["n_min"] = c.n_min;
    j["n_max"] = c.n_max;
    j["n_step"] = c.n_step;
    j["instances"] = c.instances;
    j["target"] = c.target;
    j["cap"] = c.cap;
    j["t0"] = c.t0;
    j["error_target"] = c.error_target;
    j["grid"] = c.grid;
    j["refine"] = c.refine;
  }
  return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig d;
  RunConfig c;
  try {
    c.command = j.at("command").get<std::string>();
    c.from = j.value("from", d.from);
    c.seed = j.value("seed", d.seed);
    c.format = j.value("format", std::string("json"));
    c.instance_path = j.value("instance_path", d.instance_path);
    c.generator = j.value("generator", d.generator);
    c.n = j.value("n", d.n);
    c.max_weight = j.value("max_weight", d.max_weight);
    c.weights = j.value("weights", d.weights);
    c.grid = j.value("grid", d.grid);
    c.sector = j.value("sector", d.sector);
    c.refine = j.value("refine", d.refine);
    c.time = j.value("time", d.time);
    c.steps = j.value("steps", d.steps);
    c.error_target = j.value("error_target", d.error_target);
    c.method = j.value("method", d.method);
    c.state_path = j.value("state_path", d.state_path);
    c.random_product = j.value("random_product", d.random_product);
    c.mode = j.value("mode", d.mode);
    c.shots = j.value("shots", d.shots);
    c.state_re = j.value("state_re", d.state_re);
    c.state_im = j.value("state_im", d.state_im);
    c.n_min = j.value("n_min", d.n_min);
    c.n_max = j.value("n_max", d.n_max);
    c.n_step = j.value("n_step", d.n_step);
    c.instances = j.value("instances", d.instances);
    c.target = j.value("target", d.target);
    c.cap = j.value("cap", d.cap);
    c.t0 = j.value("t0", d.t0);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, kModule, std::string("config: ") + e.what());
  }
  return c;
}

int run(const RunConfig& config, std::ostream& out) {
  if (config.format != "json" && config.format != "csv" && config.command != "replay") {
    throw Error(ErrorCode::kInvalidArgument, kModule, "unknown format '" + config.format + "'");
  }
  if (config.command == "gap-scan") return run_gap_scan(config, out);
  if (config.command == "evolve") return run_evolve(config, out);
  if (config.command == "tomo") return run_tomo(config, out);
  if (config.command == "partition") return run_partition(config, out);
  if (config.command == "ledger") return run_ledger_command(config, out);
  if (config.command == "replay") return run_replay(config, out);
  throw Error(ErrorCode::kInvalidArgument, kModule, "unknown command '" + config.command + "'");
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    return run(parse_args(argc, argv), out);
  } catch (const UsageError& e) {
    (e.exit_code == 0 ? out : err) << e.message;
    return e.exit_code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace qlab::cli
