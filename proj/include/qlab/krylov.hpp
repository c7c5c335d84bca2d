#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include <Eigen/Dense>

#include "qlab/qubit_algebra.hpp"

namespace qlab {

/// y = H x for a Hermitian H.
using LinearMap = std::function<void(std::span<const Complex>, std::span<Complex>)>;

struct KrylovOptions {
  /// Target for the a-posteriori error estimate, relative to ||v||.
  double tolerance = 1e-14;
  std::size_t max_dimension = 40;
  /// Largest half_width * |dt| attempted in one Lanczos run.
  double max_phase = 8.0;
  /// Convergence is tested every this many Lanczos iterations.
  std::size_t check_interval = 4;
};

/// Reusable Lanczos workspace for repeated exponentials on one vector length.
class KrylovExponential {
 public:
  KrylovExponential(std::size_t length, KrylovOptions options = {});

  /// v <- exp(-i H dt) v. `half_width` bounds half the spread of H's spectrum
  /// (0 = unknown); with it the step is split up front so each piece stays
  /// within max_phase. Pieces that still fail to converge are halved.
  void apply(const LinearMap& h, double dt, std::span<Complex> v, double half_width = 0.0);

  /// Krylov dimension used by the last converged sub-step.
  std::size_t last_dimension() const { return last_dimension_; }

 private:
  void apply_piece(const LinearMap& h, double dt, std::span<Complex> v);
  bool try_apply(const LinearMap& h, double dt, std::span<Complex> v);

  std::size_t length_;
  KrylovOptions options_;
  Eigen::MatrixXcd basis_;
  Eigen::VectorXcd work_;
  std::size_t last_dimension_ = 0;
};

}  // namespace qlab
