#include "qlab/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "qlab/error.hpp"

namespace qlab {
namespace {

constexpr std::string_view kModule = "spectral_analyzer";

void check_k(const HermitianOperator& op, std::size_t k) {
  if (k == 0 || k > op.dimension()) {
    throw Error(ErrorCode::kInvalidArgument, kModule,
                "requested " + std::to_string(k) + " levels of a " +
                    std::to_string(op.dimension()) + "-dimensional operator");
  }
}

Eigen::MatrixXd to_dense_real(const HermitianOperator& op) {
  const auto n = static_cast<Eigen::Index>(op.dimension());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : op.entries()) m(e.row, e.col) = e.value.real();
  return m;
}

template <typename Matrix>
EigenPairs solve_dense(const Matrix& m, std::size_t k, bool want_vectors) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(
      m, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kConvergenceFailure, kModule, "dense eigensolver failed");
  }
  EigenPairs out;
  for (std::size_t j = 0; j < k; ++j) {
    out.values.push_back(es.eigenvalues()(static_cast<Eigen::Index>(j)));
    if (want_vectors) {
      const auto col = es.eigenvectors().col(static_cast<Eigen::Index>(j));
      Amplitudes v(static_cast<std::size_t>(col.size()));
      for (Eigen::Index i = 0; i < col.size(); ++i) v[static_cast<std::size_t>(i)] = col(i);
      out.vectors.push_back(std::move(v));
    }
  }
  return out;
}

// Gershgorin bound on the spectral radius.
double row_sum_bound(const HermitianOperator& op) {
  std::vector<double> rows(op.dimension(), 0.0);
  for (const auto& e : op.entries()) rows[e.row] += std::abs(e.value);
  return rows.empty() ? 0.0 : *std::max_element(rows.begin(), rows.end());
}

void apply_column(const HermitianOperator& op, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
  out.resize(in.size());
  apply_into(op, std::span<const Complex>(in.data(), static_cast<std::size_t>(in.size())),
             std::span<Complex>(out.data(), static_cast<std::size_t>(out.size())));
}

}  // namespace

Eigen::MatrixXcd to_dense(const HermitianOperator& op) {
  const auto n = static_cast<Eigen::Index>(op.dimension());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& e : op.entries()) m(e.row, e.col) = e.value;
  return m;
}

EigenPairs dense_lowest(const HermitianOperator& op, std::size_t k, bool want_vectors) {
  check_k(op, k);
  if (op.is_real()) return solve_dense(to_dense_real(op), k, want_vectors);
  return solve_dense(to_dense(op), k, want_vectors);
}

EigenPairs davidson_lowest(const HermitianOperator& op, std::size_t k, const EigenOptions& options,
                           bool want_vectors) {
  check_k(op, k);
  const std::size_t n = op.dimension();
  const std::size_t max_subspace = std::max(options.max_subspace, 3 * k + 2);
  if (n <= max_subspace) return dense_lowest(op, k, want_vectors);

  const std::vector<double> diag = op.diagonal_values();
  const double scale_floor = 16.0 * std::numeric_limits<double>::epsilon() * row_sum_bound(op);
  const auto ni = static_cast<Eigen::Index>(n);

  Eigen::MatrixXcd basis(ni, static_cast<Eigen::Index>(max_subspace));
  Eigen::MatrixXcd image(ni, static_cast<Eigen::Index>(max_subspace));
  Eigen::Index m = 0;
  Eigen::VectorXcd scratch;

  auto add_vector = [&](Eigen::VectorXcd t) {
    const double before = t.norm();
    if (before == 0.0 || m >= static_cast<Eigen::Index>(max_subspace)) return false;
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index j = 0; j < m; ++j) t -= basis.col(j).dot(t) * basis.col(j);
    }
    const double after = t.norm();
    if (after <= 1e-10 * before) return false;
    basis.col(m) = t / after;
    apply_column(op, basis.col(m), scratch);
    image.col(m) = scratch;
    ++m;
    return true;
  };

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss;
  auto random_vector = [&] {
    Eigen::VectorXcd r(ni);
    for (Eigen::Index i = 0; i < ni; ++i) r(i) = Complex{gauss(rng), 0.0};
    return r;
  };

  // Start from the k smallest diagonal entries plus one random direction.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return diag[a] < diag[b]; });
  for (std::size_t j = 0; j < k; ++j) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(ni);
    e(static_cast<Eigen::Index>(order[j])) = 1.0;
    add_vector(std::move(e));
  }
  add_vector(random_vector());

  const auto kk = static_cast<Eigen::Index>(k);
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    Eigen::MatrixXcd projected = basis.leftCols(m).adjoint() * image.leftCols(m);
    projected = (0.5 * (projected + projected.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(projected);
    const Eigen::VectorXd& theta = es.eigenvalues();
    const Eigen::MatrixXcd ritz_coeffs = es.eigenvectors().leftCols(kk);
    const Eigen::MatrixXcd ritz = basis.leftCols(m) * ritz_coeffs;
    const Eigen::MatrixXcd residual =
        image.leftCols(m) * ritz_coeffs - ritz * theta.head(kk).asDiagonal();

    std::vector<Eigen::Index> unconverged;
    for (Eigen::Index j = 0; j < kk; ++j) {
      const double bound = options.tolerance * std::max(1.0, std::abs(theta(j))) + scale_floor;
      if (residual.col(j).norm() > bound) unconverged.push_back(j);
    }
    if (unconverged.empty()) {
      EigenPairs out;
      for (Eigen::Index j = 0; j < kk; ++j) {
        out.values.push_back(theta(j));
        if (want_vectors) {
          const Eigen::VectorXcd v = ritz.col(j).normalized();
          out.vectors.emplace_back(v.data(), v.data() + v.size());
        }
      }
      return out;
    }

    if (m + static_cast<Eigen::Index>(unconverged.size()) > static_cast<Eigen::Index>(max_subspace)) {
      const Eigen::Index keep = std::min<Eigen::Index>(m, 2 * kk + 1);
      const Eigen::MatrixXcd coeffs = es.eigenvectors().leftCols(keep);
      const Eigen::MatrixXcd new_basis = basis.leftCols(m) * coeffs;
      const Eigen::MatrixXcd new_image = image.leftCols(m) * coeffs;
      // Re-orthonormalize; the collapse loses orthogonality at rounding level.
      Eigen::HouseholderQR<Eigen::MatrixXcd> qr(new_basis);
      const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(ni, keep);
      const Eigen::MatrixXcd r = q.adjoint() * new_basis;
      const Eigen::MatrixXcd rinv = r.triangularView<Eigen::Upper>().solve(
          Eigen::MatrixXcd::Identity(keep, keep));
      basis.leftCols(keep) = q;
      image.leftCols(keep) = new_image * rinv;
      m = keep;
    }

    bool grew = false;
    for (Eigen::Index j : unconverged) {
      const double floor = 1e-8 * std::max(1.0, std::abs(theta(j)));
      Eigen::VectorXcd t(ni);
      for (Eigen::Index i = 0; i < ni; ++i) {
        double denom = theta(j) - diag[static_cast<std::size_t>(i)];
        if (std::abs(denom) < floor) denom = std::copysign(floor, denom);
        t(i) = residual(i, j) / denom;
      }
      if (add_vector(std::move(t)) || add_vector(residual.col(j))) grew = true;
    }
    if (!grew && !add_vector(random_vector())) {
      throw Error(ErrorCode::kConvergenceFailure, kModule, "Davidson subspace stagnated");
    }
  }
  throw Error(ErrorCode::kConvergenceFailure, kModule,
              "Davidson did not reach residual tolerance in " +
                  std::to_string(options.max_iterations) + " iterations");
}

EigenPairs lowest_eigenpairs(const HermitianOperator& op, std::size_t k,
                             const EigenOptions& options, bool want_vectors) {
  const bool dense =
      options.method == EigenMethod::kDense ||
      (options.method == EigenMethod::kAuto && op.dimension() <= options.dense_max_dimension);
  return dense ? dense_lowest(op, k, want_vectors)
               : davidson_lowest(op, k, options, want_vectors);
}

}  // namespace qlab
