#include "qlab/krylov.hpp"

#include <cmath>
#include <vector>

#include "qlab/error.hpp"

namespace qlab {

KrylovExponential::KrylovExponential(std::size_t length, KrylovOptions options)
    : length_(length),
      options_(options),
      basis_(static_cast<Eigen::Index>(length), static_cast<Eigen::Index>(options.max_dimension + 1)),
      work_(static_cast<Eigen::Index>(length)) {
  if (options_.max_dimension < 2 || options_.check_interval < 1 || !(options_.max_phase > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "adiabatic_engine",
                "Krylov needs dimension >= 2, check interval >= 1 and a positive phase");
  }
}

void KrylovExponential::apply(const LinearMap& h, double dt, std::span<Complex> v, double half_width) {
  if (v.size() != length_) {
    throw Error(ErrorCode::kDimensionMismatch, "adiabatic_engine", "Krylov workspace length");
  }
  if (dt == 0.0) return;
  const double pieces = std::ceil(std::abs(dt) * half_width / options_.max_phase);
  const std::size_t count = pieces > 1.0 ? static_cast<std::size_t>(pieces) : 1;
  const double sub = dt / static_cast<double>(count);
  for (std::size_t k = 0; k < count; ++k) apply_piece(h, sub, v);
}

void KrylovExponential::apply_piece(const LinearMap& h, double dt, std::span<Complex> v) {
  if (try_apply(h, dt, v)) return;
  if (std::abs(dt) < 1e-300) {
    throw Error(ErrorCode::kConvergenceFailure, "adiabatic_engine",
                "Krylov exponential failed to converge");
  }
  apply_piece(h, 0.5 * dt, v);
  apply_piece(h, 0.5 * dt, v);
}

// Lanczos three-term recurrence; the a-posteriori estimate is
// |dt| beta_m |e_m^T exp(-i T_m dt) e_1|.
bool KrylovExponential::try_apply(const LinearMap& h, double dt, std::span<Complex> v) {
  const auto n = static_cast<Eigen::Index>(length_);
  Eigen::Map<Eigen::VectorXcd> vec(v.data(), n);
  const double beta0 = vec.norm();
  if (beta0 == 0.0) return true;

  basis_.col(0) = vec / beta0;
  std::vector<double> alpha;
  std::vector<double> beta;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;

  auto finish = [&](Eigen::Index m, double b, bool force) {
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(beta.data(), m - 1);
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const Eigen::MatrixXd& q = es.eigenvectors();
    Eigen::VectorXcd phases(m);
    for (Eigen::Index l = 0; l < m; ++l) phases(l) = std::polar(q(0, l), -es.eigenvalues()(l) * dt);
    const Eigen::VectorXcd coeffs = q * phases;
    if (!force && std::abs(dt) * b * std::abs(coeffs(m - 1)) > options_.tolerance) return false;
    vec = beta0 * (basis_.leftCols(m) * coeffs);
    last_dimension_ = static_cast<std::size_t>(m);
    return true;
  };

  for (std::size_t j = 0; j < options_.max_dimension; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    h(std::span<const Complex>(basis_.col(jj).data(), length_),
      std::span<Complex>(work_.data(), length_));
    const double a = basis_.col(jj).dot(work_).real();
    work_ -= a * basis_.col(jj);
    if (j > 0) work_ -= beta.back() * basis_.col(jj - 1);
    const double b = work_.norm();
    alpha.push_back(a);
    const auto m = static_cast<Eigen::Index>(j + 1);
    // An invariant subspace makes the projection exact.
    if (b <= 1e-14 * std::abs(a) || b == 0.0) return finish(m, 0.0, true);
    if ((j + 1) % options_.check_interval == 0 || j + 1 == options_.max_dimension) {
      if (finish(m, b, false)) return true;
    }
    beta.push_back(b);
    basis_.col(jj + 1) = work_ / b;
  }
  return false;
}

}  // namespace qlab
