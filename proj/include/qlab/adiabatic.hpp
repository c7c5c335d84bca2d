#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "qlab/eigensolver.hpp"
#include "qlab/hamiltonian.hpp"
#include "qlab/krylov.hpp"

namespace qlab {

/// Computational-basis indices achieving the minimal diagonal of H_Ising.
struct GroundSpaceProjector {
  std::vector<std::uint64_t> basis_indices;

  /// Nonempty and closed under the global bit flip, or throws.
  static GroundSpaceProjector from_ising(const HermitianOperator& h_ising);
};

double success_probability(const QuantumState& state, const GroundSpaceProjector& projector);

/// First-order short-time map v -> (I - i h dt) v. Verification oracle only.
class ShortTimePropagator {
 public:
  ShortTimePropagator(HermitianOperator h, double dt);

  Amplitudes operator()(std::span<const Complex> v) const;

 private:
  HermitianOperator h_;
  double dt_;
};

enum class ExpMethod { kAuto, kEigen, kKrylov };

std::string_view to_string(ExpMethod method);

struct PropagationOptions {
  /// kAuto uses per-step eigendecomposition up to eigen_max_dimension.
  ExpMethod method = ExpMethod::kAuto;
  std::size_t eigen_max_dimension = 32;
  KrylovOptions krylov;
  /// Uniform checkpoints in s besides s = 0 (0 disables the overlap trace).
  std::size_t checkpoints = 16;
  EigenOptions eigen;
  /// Results with larger norm drift are flagged invalid.
  double norm_drift_limit = 1e-6;
  /// StepTooCoarse when the midpoint error estimate K dt^2 / 12 reaches this.
  double max_error_estimate = 0.5;
};

struct EvolutionResult {
  QuantumState final_state = QuantumState::basis(1, 0);
  /// | ||psi_final|| - 1 |, measured before any normalization (none is applied).
  double norm_drift = 0.0;
  /// (s, squared overlap with the instantaneous flip-symmetric ground space).
  std::vector<std::pair<double, double>> ground_overlap_trace;
  double success_probability = 0.0;
  double total_time = 0.0;
  std::size_t steps = 0;
  double error_estimate = 0.0;
  bool valid = true;
};

/// K dt^2 / 12 with K bounding ||[H_trans, H_Ising]||: the leading global
/// error of the exponential midpoint rule.
double midpoint_error_estimate(const PartitionInstance& instance, const ScheduleSpec& schedule);

/// Smallest multiple of 16 whose midpoint error estimate is <= error_target
/// (at least 16; 1 for total_time = 0).
std::size_t default_steps(const PartitionInstance& instance, double total_time,
                          double error_target = 1e-3);

/// Evolves the uniform initial state from s = 0 to s = 1 with the
/// piecewise-constant midpoint exponential exp(-i H(s_mid) dt) per step.
/// `seed` drives the iterative eigensolver start vectors at checkpoints.
EvolutionResult propagate(const PartitionInstance& instance, const ScheduleSpec& schedule,
                          std::uint64_t seed, const PropagationOptions& options = {});

/// Runs the same step sequence backwards (s = 1 -> 0, dt -> -dt) on `state`.
QuantumState propagate_reverse(const PartitionInstance& instance, const ScheduleSpec& schedule,
                               const QuantumState& state, const PropagationOptions& options = {});

struct ThresholdOptions {
  double initial_time = 1.0;
  double cap = 1e6;
  /// Bisection stops when (hi - lo) <= resolution * hi.
  double resolution = 0.05;
  double error_target = 1e-3;
  PropagationOptions propagation;
};

struct ThresholdResult {
  double time = 0.0;
  double success = 0.0;
  /// The sudden quench (T = 0) already meets the target.
  bool at_floor = false;
  /// No scanned time up to the cap met the target; `time` is the cap.
  bool capped = false;
  /// Every (T, success) evaluated, in evaluation order.
  std::vector<std::pair<double, double>> evaluations;
};

/// Geometric scan T0, 2 T0, ... followed by bisection. Cap events are
/// reported through `capped`.
ThresholdResult scan_threshold_time(const PartitionInstance& instance, double target,
                                    const ThresholdOptions& options = {});

/// scan_threshold_time, throwing ScanCapExceeded on a cap event.
ThresholdResult find_threshold_time(const PartitionInstance& instance, double target,
                                    const ThresholdOptions& options = {});

/// T * min_gap^2 (dimensionless, hbar = 1).
double criterion_ratio(double total_time, double min_gap);

}  // namespace qlab
