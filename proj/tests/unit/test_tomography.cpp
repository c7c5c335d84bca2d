#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qlab/error.hpp"
#include "qlab/hamiltonian.hpp"
#include "qlab/tomography.hpp"

using namespace qlab;

namespace {

const double kR = 1.0 / std::sqrt(2.0);

std::map<PauliString, double> exact_expectations(const QuantumState& s) {
  std::map<PauliString, double> out;
  for (const auto& p : all_pauli_strings(s.num_qubits())) out[p] = pauli_expectation(s, p);
  return out;
}

}  // namespace

TEST(SimulateMeasurement, EigenstatesAreDeterministic) {
  const QuantumState plus({kR, kR});
  const auto x = simulate_measurement(plus, PauliString::parse("X"), 1000, 3);
  EXPECT_EQ(x.count_plus, 1000U);
  EXPECT_EQ(x.estimate, 1.0);
  const auto z = simulate_measurement(QuantumState::basis(1, 0), PauliString::parse("Z"), 77, 5);
  EXPECT_EQ(z.estimate, 1.0);
  EXPECT_THROW(simulate_measurement(plus, PauliString::parse("I"), 10, 0), Error);
  EXPECT_THROW(simulate_measurement(plus, PauliString::parse("X"), 0, 0), Error);
}

TEST(SimulateMeasurement, BinomialConcentration) {
  const QuantumState plus({kR, kR});
  int within = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto r = simulate_measurement(plus, PauliString::parse("Z"), 10000, seed);
    EXPECT_LE(r.count_plus, r.shots);
    EXPECT_GE(r.estimate, -1.0);
    EXPECT_LE(r.estimate, 1.0);
    if (std::abs(r.estimate) <= 5.0 / 100.0) ++within;
  }
  EXPECT_GE(within, 95);
}

TEST(SimulateMeasurement, DeterministicAndOrderIndependent) {
  std::mt19937_64 rng(61);
  const QuantumState s(oracle::to_amps(oracle::random_state(3, rng)));
  const auto a = measure_full(s, 500, 9, 1);
  const auto b = measure_full(s, 500, 9, 4);
  ASSERT_EQ(a.size(), 63U);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].count_plus, b[i].count_plus);
    EXPECT_EQ(a[i].count_plus, simulate_measurement(s, a[i].observable, 500, 9).count_plus);
  }
}

TEST(ReconstructProduct, SpecExamples) {
  const std::vector<std::array<double, 3>> x{{1, 0, 0}};
  const auto sx = reconstruct_product_state(x);
  EXPECT_NEAR(sx[0].real(), kR, 1e-15);
  EXPECT_NEAR(sx[1].real(), kR, 1e-15);
  const std::vector<std::array<double, 3>> z{{0, 0, 1}};
  EXPECT_EQ(reconstruct_product_state(z)[0], Complex(1.0));
  const std::vector<std::array<double, 3>> y{{0, 1, 0}};
  const auto sy = reconstruct_product_state(y);
  EXPECT_NEAR(sy[0].real(), kR, 1e-15);
  EXPECT_NEAR(std::abs(sy[1] - Complex(0, kR)), 0.0, 1e-15);
  const std::vector<std::array<double, 3>> down{{0, 0, -1}};
  EXPECT_EQ(reconstruct_product_state(down)[1], Complex(1.0));
}

TEST(ReconstructProduct, ClipsMildExcessAndRejectsLarge) {
  const std::vector<std::array<double, 3>> mild{{1.03, 0, 0}};
  EXPECT_NEAR(reconstruct_product_state(mild).norm(), 1.0, 1e-12);
  const std::vector<std::array<double, 3>> big{{1.2, 0, 0}};
  try {
    reconstruct_product_state(big);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInconsistentRecords);
  }
}

TEST(ReconstructProduct, RoundTripFromExactExpectations) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 1 + static_cast<int>(seed % 6);
    const auto factors = random_product_factors(n, seed);
    const auto state = product_state(factors);
    std::vector<std::array<double, 3>> bloch;
    for (int q = 0; q < n; ++q) {
      bloch.push_back({pauli_expectation(state, PauliString::single(n, q, Pauli::kX)),
                       pauli_expectation(state, PauliString::single(n, q, Pauli::kY)),
                       pauli_expectation(state, PauliString::single(n, q, Pauli::kZ))});
    }
    EXPECT_GE(fidelity(state, reconstruct_product_state(bloch)), 1.0 - 1e-10);
  }
}

TEST(ReconstructProduct, RecordsMustBeSingleSiteTriples) {
  const auto state = initial_state(2);
  auto records = measure_product(state, 100, 1);
  EXPECT_NO_THROW(reconstruct_product_state(records));
  std::swap(records[0][0], records[0][1]);
  EXPECT_THROW(reconstruct_product_state(records), Error);
}

TEST(FullReconstruct, BasisStateZero) {
  const auto rho = full_state_reconstruct(exact_expectations(QuantumState::basis(1, 0)), 1);
  EXPECT_NEAR(std::abs(rho(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(rho(1, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(rho(0, 1)), 0.0, 1e-15);
}

TEST(FullReconstruct, PureStatesAreRecoveredExactly) {
  std::mt19937_64 rng(62);
  for (int n = 1; n <= 4; ++n) {
    const QuantumState s(oracle::to_amps(oracle::random_state(n, rng)));
    const auto rho = full_state_reconstruct(exact_expectations(s), n);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-13);
    EXPECT_EQ((rho - rho.adjoint()).cwiseAbs().maxCoeff(), 0.0);
    const oracle::Vec v = oracle::to_vec(s.amplitudes());
    EXPECT_LT((rho - v * v.adjoint()).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_GE(fidelity(dominant_state(rho), s), 1.0 - 1e-10);
  }
  const auto uniform = initial_state(2);
  EXPECT_GE(fidelity(dominant_state(full_state_reconstruct(exact_expectations(uniform), 2)), uniform), 1 - 1e-12);
}

TEST(FullReconstruct, SampledFidelityForTwoQubits) {
  const auto s = initial_state(2);
  int good = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::map<PauliString, double> est;
    for (const auto& r : measure_full(s, 10000, seed)) est[r.observable] = r.estimate;
    const auto rho = full_state_reconstruct(est, 2);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-14);
    const oracle::Vec v = oracle::to_vec(s.amplitudes());
    if ((v.adjoint() * rho * v)(0, 0).real() >= 0.99) ++good;
  }
  EXPECT_GE(good, 95);
}

TEST(FullReconstruct, MissingStringsAreListed) {
  auto exp = exact_expectations(initial_state(2));
  exp.erase(PauliString::parse("XY"));
  exp.erase(PauliString::parse("ZI"));
  try {
    full_state_reconstruct(exp, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingPauliStrings);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("XY"), std::string::npos);
    EXPECT_NE(msg.find("ZI"), std::string::npos);
  }
}

TEST(Budget, ClosedForms) {
  EXPECT_EQ(budget(TomographyMode::kFull, 3).operation_count, 63U);
  EXPECT_EQ(budget(TomographyMode::kFull, 1).operation_count, 3U);
  EXPECT_EQ(budget(TomographyMode::kProduct, 5).operation_count, 15U);
  double last_ratio = 0.0;
  for (int n = 1; n <= 10; ++n) {
    const double ratio = static_cast<double>(budget(TomographyMode::kFull, n).operation_count) /
                         static_cast<double>(budget(TomographyMode::kProduct, n).operation_count);
    EXPECT_GT(ratio, last_ratio);
    last_ratio = ratio;
  }
  EXPECT_THROW(budget(TomographyMode::kFull, 0), Error);
  EXPECT_EQ(all_pauli_strings(2).size(), 15U);
  EXPECT_EQ(all_pauli_strings(2).front().str(), "IX");
}

TEST(ShotNoise, ErrorScalesAsInverseSquareRoot) {
  const std::vector<std::uint64_t> shots{100, 1000, 10000, 100000};
  std::vector<double> log_c;
  std::vector<double> log_err;
  for (auto c : shots) {
    std::vector<double> errs;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto state = product_state(random_product_factors(2, 1000 + seed));
      const auto records = measure_product(state, c, seed);
      for (int q = 0; q < 2; ++q) {
        const auto est = bloch_vector(records[static_cast<std::size_t>(q)]);
        double e2 = 0.0;
        int k = 0;
        for (Pauli letter : {Pauli::kX, Pauli::kY, Pauli::kZ}) {
          const double exact = pauli_expectation(state, PauliString::single(2, q, letter));
          e2 += std::pow(est[static_cast<std::size_t>(k++)] - exact, 2);
        }
        errs.push_back(std::sqrt(e2));
      }
    }
    std::nth_element(errs.begin(), errs.begin() + errs.size() / 2, errs.end());
    log_c.push_back(std::log(static_cast<double>(c)));
    log_err.push_back(std::log(errs[errs.size() / 2]));
  }
  const double mx = (log_c[0] + log_c[1] + log_c[2] + log_c[3]) / 4;
  const double my = (log_err[0] + log_err[1] + log_err[2] + log_err[3]) / 4;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    sxy += (log_c[i] - mx) * (log_err[i] - my);
    sxx += (log_c[i] - mx) * (log_c[i] - mx);
  }
  EXPECT_NEAR(sxy / sxx, -0.5, 0.1);
}
