#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qlab/eigensolver.hpp"
#include "qlab/error.hpp"
#include "qlab/hamiltonian.hpp"
#include "qlab/spectral.hpp"

using namespace qlab;

namespace {

std::vector<double> oracle_levels(const HermitianOperator& op, std::size_t k) {
  Eigen::SelfAdjointEigenSolver<oracle::Mat> es(oracle::dense(op), Eigen::EigenvaluesOnly);
  std::vector<double> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(es.eigenvalues()(static_cast<Eigen::Index>(i)));
  return out;
}

double residual(const HermitianOperator& op, const Amplitudes& v, double theta) {
  Amplitudes hv(v.size());
  apply_into(op, v, hv);
  double r = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) r += std::norm(hv[i] - theta * v[i]);
  return std::sqrt(r);
}

}  // namespace

TEST(DenseLowest, RandomHermitian) {
  std::mt19937_64 rng(31);
  const auto op = oracle::to_operator(oracle::random_hermitian(16, rng));
  const auto pairs = dense_lowest(op, 3, true);
  const auto expected = oracle_levels(op, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(pairs.values[i], expected[i], 1e-12);
    EXPECT_LT(residual(op, pairs.vectors[i], pairs.values[i]), 1e-11);
  }
  EXPECT_THROW(dense_lowest(op, 17, false), Error);
}

TEST(Davidson, AgreesWithDenseOnAdiabaticHamiltonians) {
  std::mt19937_64 rng(32);
  EigenOptions opts;
  opts.method = EigenMethod::kIterative;
  for (int n : {7, 8, 10}) {
    const auto inst = generate_instance({WeightDistribution::kUniformInt, n, rng(), 0});
    const auto ht = build_transverse(n);
    const auto hi = build_ising(inst);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
      const auto h = interpolate(ht, hi, unit(rng));
      const auto iterative = davidson_lowest(h, 2, opts, true);
      const auto dense = dense_lowest(h, 2, false);
      for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_NEAR(iterative.values[i], dense.values[i], 1e-9 * std::max(1.0, std::abs(dense.values[i])));
      }
    }
  }
}

TEST(Davidson, DegenerateLowestLevels) {
  EigenOptions opts;
  opts.method = EigenMethod::kIterative;
  std::vector<double> diag(256);
  for (std::size_t i = 0; i < diag.size(); ++i) diag[i] = static_cast<double>(i / 3);
  const auto pairs = davidson_lowest(HermitianOperator::diagonal(diag), 4, opts, false);
  EXPECT_NEAR(pairs.values[0], 0.0, 1e-10);
  EXPECT_NEAR(pairs.values[2], 0.0, 1e-10);
  EXPECT_NEAR(pairs.values[3], 1.0, 1e-10);
}

TEST(Davidson, ReportsConvergenceFailure) {
  EigenOptions opts;
  opts.method = EigenMethod::kIterative;
  opts.max_iterations = 1;
  opts.tolerance = 1e-300;
  const auto h = interpolate(build_transverse(9), build_ising(PartitionInstance({5, 3, 2, 9, 4, 1, 7, 6, 8})), 0.4);
  EXPECT_THROW(davidson_lowest(h, 2, opts, false), Error);
}

TEST(LowestEigenpairs, AutoSelectsRouteWithSameAnswer) {
  const auto h = interpolate(build_transverse(6), build_ising(PartitionInstance({3, 5, 2, 8, 1, 4})), 0.3);
  EigenOptions dense_opts;
  dense_opts.method = EigenMethod::kDense;
  EigenOptions it_opts;
  it_opts.method = EigenMethod::kIterative;
  const auto a = lowest_eigenpairs(h, 2, dense_opts, false);
  const auto b = lowest_eigenpairs(h, 2, it_opts, false);
  const auto c = lowest_eigenpairs(h, 2, {}, false);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_NEAR(a.values[i], b.values[i], 1e-9);
    EXPECT_EQ(a.values[i], c.values[i]);
  }
}
