#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qlab/error.hpp"
#include "qlab/hamiltonian.hpp"
#include "qlab/spectral.hpp"

using namespace qlab;

namespace {

// Eigenvalues of H whose eigenvectors are even under the global flip,
// from a dense diagonalization of the flip-projected operator.
std::vector<double> oracle_symmetric_levels(const oracle::Mat& h, int n) {
  const auto d = h.rows();
  const oracle::Mat x = oracle::pauli_string(std::string(static_cast<std::size_t>(n), 'X'));
  const oracle::Mat p = 0.5 * (oracle::Mat::Identity(d, d) + x);
  // Orthonormal basis of the +1 eigenspace of X^N.
  Eigen::SelfAdjointEigenSolver<oracle::Mat> px(p);
  oracle::Mat basis = px.eigenvectors().rightCols(d / 2);
  Eigen::SelfAdjointEigenSolver<oracle::Mat> es(basis.adjoint() * h * basis, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

}  // namespace

TEST(LowestLevels, SpecExamples) {
  const auto t = lowest_levels(build_transverse(2), 2, Sector::kFull);
  EXPECT_NEAR(t[0], -2.0, 1e-12);
  EXPECT_NEAR(t[1], 0.0, 1e-12);
  const auto full = lowest_levels(build_ising(PartitionInstance({1, 1})), 2, Sector::kFull);
  EXPECT_NEAR(full[0], 0.0, 1e-12);
  EXPECT_NEAR(full[1], 0.0, 1e-12);
  const auto sym = lowest_levels(build_ising(PartitionInstance({1, 1})), 2, Sector::kFlipSymmetric);
  EXPECT_NEAR(sym[0], 0.0, 1e-12);
  EXPECT_NEAR(sym[1], 4.0, 1e-12);
}

TEST(FlipSector, LevelsMatchProjectedDenseOracleAndFullSpectrum) {
  std::mt19937_64 rng(41);
  for (int n = 2; n <= 7; ++n) {
    const auto inst = generate_instance({WeightDistribution::kUniformInt, n, rng(), 0});
    for (double s : {0.1, 0.5, 0.9}) {
      const auto h = interpolate(build_transverse(n), build_ising(inst), s);
      const oracle::Mat dense = oracle::dense(h);
      const auto expected = oracle_symmetric_levels(dense, n);
      const auto got = lowest_levels(h, 2, Sector::kFlipSymmetric);
      Eigen::SelfAdjointEigenSolver<oracle::Mat> full(dense, Eigen::EigenvaluesOnly);
      for (std::size_t i = 0; i < 2; ++i) {
        const double scale = std::max(1.0, std::abs(expected[i]));
        EXPECT_NEAR(got[i], expected[i], 1e-9 * scale);
        EXPECT_LT((full.eigenvalues().array() - got[i]).abs().minCoeff(), 1e-9 * scale);
      }
    }
  }
}

TEST(FlipSector, ProjectAndLiftAreInverseOnEvenStates) {
  const auto psi = initial_state(4);
  const auto sector = project_to_flip_sector(psi.amplitudes());
  const auto back = lift_from_flip_sector(sector);
  EXPECT_LT(distance_squared(back, psi.amplitudes()), 1e-28);
  EXPECT_THROW(restrict_to_flip_sector(pauli_matrix(PauliString::parse("ZI"))), Error);
}

TEST(GroundSpace, DegenerateDiagonalAndDense) {
  const auto diag = ground_space(build_ising(PartitionInstance({1, 1})), {});
  EXPECT_EQ(diag.values.size(), 2U);
  const auto gs = ground_space(build_transverse(3), {});
  ASSERT_EQ(gs.values.size(), 1U);
  EXPECT_NEAR(gs.values[0], -3.0, 1e-12);
  EXPECT_NEAR(std::abs(inner_product(gs.vectors[0], initial_state(3).amplitudes())), 1.0, 1e-12);
}

TEST(GapProfile, PairEndpoints) {
  GapOptions opts;
  opts.grid_size = 9;
  const auto sym = gap_profile(PartitionInstance({1, 1}), opts);
  EXPECT_NEAR(sym.e1.front() - sym.e0.front(), 4.0, 1e-12);
  EXPECT_NEAR(sym.e1.back() - sym.e0.back(), 4.0, 1e-12);
  opts.sector = Sector::kFull;
  const auto full = gap_profile(PartitionInstance({1, 1}), opts);
  EXPECT_NEAR(full.e1.back() - full.e0.back(), 0.0, 1e-12);
  EXPECT_EQ(full.min_gap, full.e1.back() - full.e0.back());
}

TEST(GapProfile, InvariantsOnRandomInstances) {
  std::mt19937_64 rng(42);
  for (int n = 3; n <= 7; ++n) {
    const auto inst = generate_instance({WeightDistribution::kUniformInt, n, rng(), 0});
    for (auto refine : {GapRefinement::kNone, GapRefinement::kHalving, GapRefinement::kBrent}) {
      GapOptions opts;
      opts.grid_size = 16;
      opts.refinement = refine;
      const auto p = gap_profile(inst, opts);
      EXPECT_NEAR(p.e0.front(), -n, 1e-10);
      double min_gap = INFINITY;
      for (std::size_t k = 0; k < p.s_grid.size(); ++k) {
        EXPECT_GE(p.e1[k], p.e0[k] - 1e-10);
        if (k > 0) {
          EXPECT_GT(p.s_grid[k], p.s_grid[k - 1]);
          // Weyl: |E0(s') - E0(s)| <= |s' - s| * ||H_I - H_T||.
          const double bound = (p.s_grid[k] - p.s_grid[k - 1]) * (inst.total() * inst.total() + n);
          EXPECT_LE(std::abs(p.e0[k] - p.e0[k - 1]), bound * (1 + 1e-12) + 1e-12);
        }
        min_gap = std::min(min_gap, p.e1[k] - p.e0[k]);
      }
      EXPECT_EQ(p.min_gap, min_gap);
      if (refine != GapRefinement::kNone) {
        GapOptions coarse = opts;
        coarse.refinement = GapRefinement::kNone;
        EXPECT_LE(p.min_gap, gap_profile(inst, coarse).min_gap);
      }
    }
  }
}

TEST(GapProfile, IterativeAndDenseAgree) {
  const auto inst = generate_instance({WeightDistribution::kUniformInt, 9, 7, 0});
  GapOptions dense;
  dense.grid_size = 8;
  dense.refinement = GapRefinement::kNone;
  dense.eigen.method = EigenMethod::kDense;
  GapOptions iterative = dense;
  iterative.eigen.method = EigenMethod::kIterative;
  const auto a = gap_profile(inst, dense);
  const auto b = gap_profile(inst, iterative);
  for (std::size_t k = 0; k < a.s_grid.size(); ++k) {
    EXPECT_NEAR(a.e0[k], b.e0[k], 1e-9 * std::max(1.0, std::abs(a.e0[k])));
    EXPECT_NEAR(a.e1[k], b.e1[k], 1e-9 * std::max(1.0, std::abs(a.e1[k])));
  }
}

TEST(GapProfile, RejectsTinyGrid) {
  GapOptions opts;
  opts.grid_size = 2;
  EXPECT_THROW(gap_profile(PartitionInstance({1, 1}), opts), Error);
}

TEST(FitGapScaling, RecoversExponentialGenerator) {
  std::vector<std::pair<int, std::vector<double>>> data;
  for (int n : {4, 6, 8, 10}) data.push_back({n, std::vector<double>(5, std::exp(-0.5 * n))});
  const auto fit = fit_gap_scaling(data);
  EXPECT_NEAR(fit.c, 0.5, 1e-12);
  EXPECT_NEAR(fit.log_residual, 0.0, 1e-12);
  EXPECT_GT(fit.power_residual, fit.log_residual);
}

TEST(FitGapScaling, PrefersPowerLawForInverseN) {
  std::vector<std::pair<int, std::vector<double>>> data;
  for (int n : {4, 6, 8, 10, 12}) data.push_back({n, {1.0 / n, 1.0 / n, 1.0 / n, 2.0, 0.0001}});
  const auto fit = fit_gap_scaling(data);
  EXPECT_NEAR(fit.power_residual, 0.0, 1e-12);
  EXPECT_LT(fit.power_residual, fit.log_residual);
  EXPECT_NEAR(fit.power_exponent, 1.0, 1e-12);
}

TEST(FitGapScaling, Errors) {
  std::vector<std::pair<int, std::vector<double>>> three;
  for (int n : {4, 6, 8}) three.push_back({n, std::vector<double>(5, 0.1)});
  EXPECT_THROW(fit_gap_scaling(three), Error);
  auto few = three;
  few.push_back({10, {0.1, 0.1}});
  EXPECT_THROW(fit_gap_scaling(few), Error);
  auto zero = three;
  zero.push_back({10, {0.1, 0.1, 0.0, 0.1, 0.1}});
  EXPECT_THROW(fit_gap_scaling(zero), Error);
}
