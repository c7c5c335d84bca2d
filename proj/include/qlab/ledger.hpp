#pragma once
// Per-N costs of tomography (f), verification (g) and adiabatic evolution,
// with exponential-vs-polynomial model comparison of the evolution times.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qlab/adiabatic.hpp"
#include "qlab/hamiltonian.hpp"
#include "qlab/spectral.hpp"
#include "qlab/tomography.hpp"

namespace qlab {

enum class CostLabel { kFFull, kFProduct, kG, kTEvolution };

std::string_view to_string(CostLabel label);
CostLabel parse_cost_label(std::string_view text);

struct MorphismCost {
  CostLabel label = CostLabel::kG;
  int n = 0;
  /// Set for f and g records.
  std::optional<std::uint64_t> operation_count;
  /// Set for T_evolution records; equals the cap when `capped`.
  std::optional<double> threshold_time;
  bool capped = false;

  // T_evolution details.
  bool at_floor = false;
  double success = 0.0;
  std::vector<double> weights;
  std::uint64_t instance_seed = 0;
  /// Flip-sector minimum gap and T* gap^2, when the ledger computed them.
  std::optional<double> min_gap;
  std::optional<double> criterion_ratio;

  friend bool operator==(const MorphismCost&, const MorphismCost&) = default;
};

MorphismCost measure_f(int n, TomographyMode mode);
MorphismCost measure_g(int n);

enum class InstanceFilter { kAny, kPerfect, kUniqueOptimum };

struct InstanceEnsemble {
  WeightDistribution distribution = WeightDistribution::kUniformInt;
  std::int64_t max_weight = 0;
  std::uint64_t seed = 0;
  InstanceFilter filter = InstanceFilter::kPerfect;
  /// Rejection-sampling attempts allowed per instance.
  std::size_t max_tries = 10000;
};

struct SampledInstance {
  std::uint64_t seed = 0;
  PartitionInstance instance;
};

/// Generator seed for attempt `attempt` of instance `index` at size n.
std::uint64_t derive_seed(std::uint64_t base, int n, std::size_t index, std::size_t attempt);

/// `count` seeded instances passing the ensemble filter. Throws
/// RejectionSamplingExhausted when one instance needs more than max_tries.
std::vector<SampledInstance> sample_instances(int n, std::size_t count,
                                              const InstanceEnsemble& ensemble);

struct EvolutionSpec {
  int n = 4;
  std::size_t instances = 10;
  double target = 0.99;
  InstanceEnsemble ensemble;
  ThresholdOptions threshold;
  /// Also compute flip-sector gap profiles and criterion ratios.
  bool with_gaps = false;
  GapOptions gap;
  unsigned jobs = 1;
};

/// One T_evolution record per perfect-partition instance; cap events are
/// kept with capped = true.
std::vector<MorphismCost> measure_evolution(const EvolutionSpec& spec);

/// Least-squares fits of log(median T*) against N and against log N.
struct TimeScalingFit {
  std::vector<std::pair<int, double>> medians;
  double exp_rate = 0.0;
  double exp_log_amplitude = 0.0;
  double exp_residual = 0.0;
  double poly_exponent = 0.0;
  double poly_log_amplitude = 0.0;
  double poly_residual = 0.0;
};

enum class Verdict { kConsistentWithPoly, kInconsistentWithPoly, kInconclusive };

std::string_view to_string(Verdict verdict);
Verdict parse_verdict(std::string_view text);

/// Inconclusive when the residuals differ by at most 10% of the larger one;
/// otherwise the model with the lower residual wins.
Verdict classify(double exp_residual, double poly_residual);

struct LedgerReport {
  std::vector<MorphismCost> costs;
  std::optional<GapScalingFit> gap_fit;
  TimeScalingFit time_fit;
  Verdict verdict = Verdict::kInconclusive;
  std::size_t cap_events = 0;
  nlohmann::json provenance = nlohmann::json::object();
};

/// Requires T_evolution records at >= 4 distinct N with positive medians.
LedgerReport assemble(std::vector<MorphismCost> costs, std::optional<GapScalingFit> gap_fit,
                      nlohmann::json provenance = nlohmann::json::object());

nlohmann::json report_to_json(const LedgerReport& report);
LedgerReport report_from_json(const nlohmann::json& json);

/// label,N,value,capped,schema_version with one row per cost record.
std::string report_to_csv(const LedgerReport& report);

/// Atomically writes the report as "json" or "csv". Unknown formats throw
/// before anything touches the filesystem. `header` entries are merged into
/// the JSON root.
void emit(const LedgerReport& report, std::string_view format, const std::filesystem::path& path,
          const nlohmann::json& header = nlohmann::json::object());

struct LedgerSpec {
  int n_min = 4;
  int n_max = 10;
  int n_step = 2;
  std::size_t instances = 10;
  double target = 0.99;
  std::uint64_t seed = 1;
  WeightDistribution distribution = WeightDistribution::kUniformInt;
  std::int64_t max_weight = 0;
  ThresholdOptions threshold;
  GapOptions gap;
  unsigned jobs = 1;
};

/// Full pipeline: f and g counts, threshold scans with gap profiles, and the
/// gap fit over instances whose optimum is unique up to the mirror.
LedgerReport run_ledger(const LedgerSpec& spec);

}  // namespace qlab
