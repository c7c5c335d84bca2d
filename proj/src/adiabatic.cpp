#include "qlab/adiabatic.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "qlab/error.hpp"
#include "qlab/spectral.hpp"

namespace qlab {
namespace {

constexpr std::string_view kModule = "adiabatic_engine";

// One exponential midpoint step exp(-i H(s) dt) of H(s) = (1-s) H_trans + s D.
class MidpointStepper {
 public:
  MidpointStepper(const PartitionInstance& instance, const PropagationOptions& options)
      : h_trans_(build_transverse(instance.size())),
        ising_diag_(build_ising(instance).diagonal_values()),
        dim_(h_trans_.dimension()),
        use_eigen_(options.method == ExpMethod::kEigen ||
                   (options.method == ExpMethod::kAuto && dim_ <= options.eigen_max_dimension)),
        krylov_(dim_, options.krylov),
        n_(instance.size()) {
    const auto [lo, hi] = std::minmax_element(ising_diag_.begin(), ising_diag_.end());
    diag_spread_ = *hi - *lo;
    if (use_eigen_) {
      const auto n = static_cast<Eigen::Index>(dim_);
      dense_trans_ = Eigen::MatrixXd::Zero(n, n);
      for (const auto& e : h_trans_.entries()) dense_trans_(e.row, e.col) = e.value.real();
    }
  }

  void step(std::span<Complex> psi, double s, double dt) {
    if (dt == 0.0) return;
    if (use_eigen_) {
      eigen_step(psi, s, dt);
      return;
    }
    const double a = 1.0 - s;
    krylov_.apply(
        [&](std::span<const Complex> in, std::span<Complex> out) {
          apply_into(h_trans_, in, out, a);
          for (std::size_t i = 0; i < in.size(); ++i) out[i] += s * ising_diag_[i] * in[i];
        },
        dt, psi, a * n_ + 0.5 * s * diag_spread_);
  }

 private:
  void eigen_step(std::span<Complex> psi, double s, double dt) {
    const auto n = static_cast<Eigen::Index>(dim_);
    Eigen::MatrixXd h = (1.0 - s) * dense_trans_;
    for (Eigen::Index i = 0; i < n; ++i) h(i, i) += s * ising_diag_[static_cast<std::size_t>(i)];
    solver_.compute(h, Eigen::ComputeEigenvectors);
    const Eigen::MatrixXcd vecs = solver_.eigenvectors().cast<Complex>();
    Eigen::Map<Eigen::VectorXcd> v(psi.data(), n);
    Eigen::VectorXcd coeffs = vecs.adjoint() * v;
    for (Eigen::Index i = 0; i < n; ++i) coeffs(i) *= std::polar(1.0, -solver_.eigenvalues()(i) * dt);
    v = vecs * coeffs;
  }

  HermitianOperator h_trans_;
  std::vector<double> ising_diag_;
  std::size_t dim_;
  bool use_eigen_;
  Eigen::MatrixXd dense_trans_;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver_;
  KrylovExponential krylov_;
  int n_;
  double diag_spread_ = 0.0;
};

void check_steps(const PartitionInstance& instance, const ScheduleSpec& schedule,
                 const PropagationOptions& options, double estimate) {
  if (schedule.total_time > 0.0 && !(estimate < options.max_error_estimate)) {
    std::ostringstream msg;
    msg << "midpoint error estimate " << estimate << " >= " << options.max_error_estimate
        << " with " << schedule.num_steps << " steps over T = " << schedule.total_time
        << "; use at least " << default_steps(instance, schedule.total_time,
                                              0.5 * options.max_error_estimate)
        << " steps";
    throw Error(ErrorCode::kStepTooCoarse, kModule, msg.str());
  }
}

}  // namespace

// --- ground space and success -------------------------------------------------

GroundSpaceProjector GroundSpaceProjector::from_ising(const HermitianOperator& h_ising) {
  if (!h_ising.is_diagonal()) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "H_Ising must be diagonal");
  }
  const auto diag = h_ising.diagonal_values();
  const double min_value = *std::min_element(diag.begin(), diag.end());
  GroundSpaceProjector projector;
  for (std::uint64_t b = 0; b < diag.size(); ++b) {
    if (diag[b] == min_value) projector.basis_indices.push_back(b);
  }
  const std::uint64_t mask = diag.size() - 1;
  for (auto b : projector.basis_indices) {
    if (!std::binary_search(projector.basis_indices.begin(), projector.basis_indices.end(),
                            b ^ mask)) {
      throw Error(ErrorCode::kInvalidArgument, kModule,
                  "ground space is not closed under the global flip");
    }
  }
  return projector;
}

double success_probability(const QuantumState& state, const GroundSpaceProjector& projector) {
  double p = 0.0;
  for (auto b : projector.basis_indices) {
    if (b >= state.dimension()) {
      throw Error(ErrorCode::kDimensionMismatch, kModule, "projector index beyond state");
    }
    p += std::norm(state[b]);
  }
  return p;
}

// --- short-time propagator ----------------------------------------------------

ShortTimePropagator::ShortTimePropagator(HermitianOperator h, double dt)
    : h_(std::move(h)), dt_(dt) {
  if (!(dt >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "short-time step must be >= 0");
  }
}

Amplitudes ShortTimePropagator::operator()(std::span<const Complex> v) const {
  Amplitudes out(v.begin(), v.end());
  apply_into(h_, v, out, Complex{0.0, -dt_}, true);
  return out;
}

std::string_view to_string(ExpMethod method) {
  switch (method) {
    case ExpMethod::kAuto: return "auto";
    case ExpMethod::kEigen: return "eigen";
    case ExpMethod::kKrylov: return "krylov";
  }
  return "auto";
}

// --- propagation --------------------------------------------------------------

double midpoint_error_estimate(const PartitionInstance& instance, const ScheduleSpec& schedule) {
  const double k = transverse_commutator_bound(build_ising(instance).diagonal_values());
  const double dt = schedule.step();
  return k * dt * dt / 12.0;
}

std::size_t default_steps(const PartitionInstance& instance, double total_time,
                          double error_target) {
  if (total_time == 0.0) return 1;
  if (!(error_target > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "error target must be positive");
  }
  const double k = transverse_commutator_bound(build_ising(instance).diagonal_values());
  const double raw = std::ceil(total_time * std::sqrt(k / (12.0 * error_target)));
  const auto steps = static_cast<std::size_t>(std::max(16.0, raw));
  return (steps + 15) / 16 * 16;
}

EvolutionResult propagate(const PartitionInstance& instance, const ScheduleSpec& schedule,
                          std::uint64_t seed, const PropagationOptions& options) {
  const int n = instance.size();
  check_qubit_count(n, kDefaultMaxQubits, kModule);
  const double estimate = midpoint_error_estimate(instance, schedule);
  check_steps(instance, schedule, options, estimate);

  const HermitianOperator h_ising = build_ising(instance);
  const GroundSpaceProjector projector = GroundSpaceProjector::from_ising(h_ising);
  MidpointStepper stepper(instance, options);

  const std::size_t steps = schedule.num_steps;
  const double dt = schedule.step();
  const QuantumState start = initial_state(n);
  Amplitudes psi(start.amplitudes().begin(), start.amplitudes().end());

  EvolutionResult result;
  result.total_time = schedule.total_time;
  result.steps = steps;
  result.error_estimate = schedule.total_time > 0.0 ? estimate : 0.0;

  std::set<std::size_t> checkpoints;
  HermitianOperator trans_sector;
  HermitianOperator ising_sector;
  EigenOptions eig = options.eigen;
  eig.seed = seed;
  if (options.checkpoints > 0) {
    for (std::size_t j = 0; j <= options.checkpoints; ++j) {
      checkpoints.insert(static_cast<std::size_t>(
          std::llround(static_cast<double>(j) * static_cast<double>(steps) /
                       static_cast<double>(options.checkpoints))));
    }
    trans_sector = restrict_to_flip_sector(build_transverse(n));
    ising_sector = restrict_to_flip_sector(h_ising);
  }
  auto record = [&](std::size_t k) {
    if (!checkpoints.contains(k)) return;
    const double s = static_cast<double>(k) / static_cast<double>(steps);
    const EigenPairs ground = ground_space(interpolate(trans_sector, ising_sector, s), eig);
    const Amplitudes coords = project_to_flip_sector(psi);
    double overlap = 0.0;
    for (const auto& g : ground.vectors) overlap += std::norm(inner_product(g, coords));
    result.ground_overlap_trace.emplace_back(s, overlap);
  };

  record(0);
  for (std::size_t k = 0; k < steps; ++k) {
    const double s_mid = (static_cast<double>(k) + 0.5) / static_cast<double>(steps);
    stepper.step(psi, s_mid, dt);
    record(k + 1);
  }

  result.final_state = QuantumState::unnormalized(std::move(psi));
  result.norm_drift = std::abs(result.final_state.norm() - 1.0);
  result.valid = result.norm_drift < options.norm_drift_limit;
  result.success_probability = success_probability(result.final_state, projector);
  return result;
}

QuantumState propagate_reverse(const PartitionInstance& instance, const ScheduleSpec& schedule,
                               const QuantumState& state, const PropagationOptions& options) {
  if (state.num_qubits() != instance.size()) {
    throw Error(ErrorCode::kDimensionMismatch, kModule, "state and instance sizes differ");
  }
  check_steps(instance, schedule, options, midpoint_error_estimate(instance, schedule));
  MidpointStepper stepper(instance, options);
  Amplitudes psi(state.amplitudes().begin(), state.amplitudes().end());
  const std::size_t steps = schedule.num_steps;
  const double dt = schedule.step();
  for (std::size_t k = steps; k-- > 0;) {
    const double s_mid = (static_cast<double>(k) + 0.5) / static_cast<double>(steps);
    stepper.step(psi, s_mid, -dt);
  }
  return QuantumState::unnormalized(std::move(psi));
}

// --- threshold scan -----------------------------------------------------------

ThresholdResult scan_threshold_time(const PartitionInstance& instance, double target,
                                    const ThresholdOptions& options) {
  if (!(target > 0.0 && target < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "target must lie in (0, 1)");
  }
  if (!(options.initial_time > 0.0) || !(options.resolution > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "scan needs T0 > 0 and resolution > 0");
  }
  PropagationOptions prop = options.propagation;
  prop.checkpoints = 0;
  ThresholdResult result;
  auto success_at = [&](double t) {
    const ScheduleSpec schedule(t, default_steps(instance, t, options.error_target));
    const double p = propagate(instance, schedule, 0, prop).success_probability;
    result.evaluations.emplace_back(t, p);
    return p;
  };
  // Sums of squared amplitudes land within rounding of exact fractions such as 1/2.
  const double threshold = target - 1e-12;

  const double sudden = success_at(0.0);
  if (sudden >= threshold) {
    result.time = 0.0;
    result.success = sudden;
    result.at_floor = true;
    return result;
  }

  double lo = 0.0;
  double hi = options.initial_time;
  double last = sudden;
  while (true) {
    if (hi > options.cap) {
      result.time = options.cap;
      result.success = last;
      result.capped = true;
      return result;
    }
    last = success_at(hi);
    if (last >= threshold) break;
    lo = hi;
    hi *= 2.0;
  }
  double hi_success = last;
  while (hi - lo > options.resolution * hi) {
    const double mid = 0.5 * (lo + hi);
    const double p = success_at(mid);
    if (p >= threshold) {
      hi = mid;
      hi_success = p;
    } else {
      lo = mid;
    }
  }
  result.time = hi;
  result.success = hi_success;
  return result;
}

ThresholdResult find_threshold_time(const PartitionInstance& instance, double target,
                                    const ThresholdOptions& options) {
  ThresholdResult result = scan_threshold_time(instance, target, options);
  if (result.capped) {
    std::ostringstream msg;
    msg << "threshold beyond cap " << options.cap << " (success " << result.success << ")";
    throw Error(ErrorCode::kScanCapExceeded, kModule, msg.str());
  }
  return result;
}

double criterion_ratio(double total_time, double min_gap) {
  if (!(min_gap > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "minimum gap must be positive");
  }
  return total_time * min_gap * min_gap;
}

}  // namespace qlab
