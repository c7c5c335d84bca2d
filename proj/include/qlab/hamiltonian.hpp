#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qlab/qubit_algebra.hpp"

namespace qlab {

/// Positive weights n_1..n_N of a number-partitioning instance, N >= 2.
class PartitionInstance {
 public:
  explicit PartitionInstance(std::vector<double> weights);

  int size() const { return static_cast<int>(weights_.size()); }
  std::span<const double> weights() const { return weights_; }
  double total() const;
  /// True when every weight is an integer below 2^31, so signed sums and their
  /// squares are exact in 64-bit integer arithmetic.
  bool is_integral() const { return integral_; }
  std::vector<std::int64_t> integer_weights() const;

  friend bool operator==(const PartitionInstance&, const PartitionInstance&) = default;

 private:
  std::vector<double> weights_;
  bool integral_ = false;
};

/// Linear schedule s(t) = t / total_time over num_steps uniform steps (hbar = 1).
/// total_time = 0 is the sudden-quench limit.
struct ScheduleSpec {
  double total_time = 1.0;
  std::size_t num_steps = 1;

  ScheduleSpec() = default;
  ScheduleSpec(double total_time, std::size_t num_steps);

  double step() const { return total_time / static_cast<double>(num_steps); }
  double s_at(double t) const;
};

/// -sum_i sigma^x_i.
HermitianOperator build_transverse(int n, int max_qubits = kDefaultMaxQubits);

/// (sum_i n_i sigma^z_i)^2, built term by term as sum_ij n_i n_j z_i z_j.
HermitianOperator build_ising(const PartitionInstance& instance,
                              int max_qubits = kDefaultMaxQubits);

/// (1 - s) h_trans + s h_ising.
HermitianOperator interpolate(const HermitianOperator& h_trans, const HermitianOperator& h_ising,
                              double s);

/// Uniform superposition, every amplitude 2^{-N/2}.
QuantumState initial_state(int n, int max_qubits = kDefaultMaxQubits);

/// X^{(x)N}, the global spin flip.
HermitianOperator global_flip(int n, int max_qubits = kDefaultMaxQubits);

/// Upper bound on ||[H_trans, diag(d)]||: sum over qubits of the largest
/// diagonal jump across a single bit flip.
double transverse_commutator_bound(std::span<const double> ising_diagonal);

// --- instance files and generators ------------------------------------------

/// Accepts {"weights": [...]} JSON or plain text with one weight per line
/// (blank lines and '#' comments ignored). Non-positive weights are rejected
/// with the offending line number.
PartitionInstance parse_instance(std::string_view text);
PartitionInstance load_instance(const std::filesystem::path& path);
std::string instance_to_json(const PartitionInstance& instance);

enum class WeightDistribution { kUniformInt, kUniformReal };

std::string_view to_string(WeightDistribution dist);
WeightDistribution parse_distribution(std::string_view text);

struct GeneratorSpec {
  WeightDistribution distribution = WeightDistribution::kUniformInt;
  int n = 4;
  std::uint64_t seed = 0;
  /// Upper end of the integer range; 0 means 2^N.
  std::int64_t max_weight = 0;
};

/// Uniform integers in [1, max_weight] or uniform reals in (0, 1], seeded.
PartitionInstance generate_instance(const GeneratorSpec& spec);

}  // namespace qlab
