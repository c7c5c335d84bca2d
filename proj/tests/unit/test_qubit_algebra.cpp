#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qlab/error.hpp"
#include "qlab/hamiltonian.hpp"
#include "qlab/qubit_algebra.hpp"

using namespace qlab;

namespace {

const double kR = 1.0 / std::sqrt(2.0);

QuantumState plus() { return QuantumState({kR, kR}); }

PauliString random_pauli(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> letter(0, 3);
  std::vector<Pauli> letters;
  for (int i = 0; i < n; ++i) letters.push_back(static_cast<Pauli>(letter(rng)));
  return PauliString(letters);
}

}  // namespace

TEST(QuantumState, RejectsBadLengthAndNorm) {
  EXPECT_THROW(QuantumState({1.0, 0.0, 0.0}), Error);
  EXPECT_THROW(QuantumState({1.0, 1e-5}), Error);
  EXPECT_NO_THROW(QuantumState({1.0, 1e-7 * 1e-7}));
  EXPECT_THROW(QuantumState::basis(2, 4), Error);
}

TEST(QuantumState, BasisOrderingPutsQubitZeroFirst) {
  const auto s = QuantumState::basis(2, 1);
  EXPECT_DOUBLE_EQ(pauli_expectation(s, PauliString::parse("ZI")), 1.0);
  EXPECT_DOUBLE_EQ(pauli_expectation(s, PauliString::parse("IZ")), -1.0);
}

TEST(PauliString, ParseAndPrint) {
  EXPECT_EQ(PauliString::parse("XZIY").str(), "XZIY");
  EXPECT_THROW(PauliString::parse("XQ"), Error);
  EXPECT_THROW(PauliString::parse(""), Error);
  EXPECT_TRUE(PauliString::parse("II").is_identity());
  EXPECT_EQ(PauliString::single(3, 1, Pauli::kY).str(), "IYI");
}

TEST(PauliMatrix, SingleQubitX) {
  const auto x = pauli_matrix(PauliString::parse("X"));
  EXPECT_EQ(x.at(0, 1), Complex(1.0));
  EXPECT_EQ(x.at(1, 0), Complex(1.0));
  EXPECT_EQ(x.at(0, 0), Complex(0.0));
  EXPECT_EQ(x.nonzeros(), 2U);
}

TEST(PauliMatrix, ZIIsDiagonalPlusPlusMinusMinus) {
  const auto zi = pauli_matrix(PauliString::parse("ZI"));
  EXPECT_TRUE(zi.is_diagonal());
  const auto d = zi.diagonal_values();
  EXPECT_EQ(d, (std::vector<double>{1, 1, -1, -1}));
}

TEST(PauliMatrix, XXFlipsBothBits) {
  const auto out = apply(pauli_matrix(PauliString::parse("XX")), QuantumState::basis(2, 0));
  EXPECT_EQ(out, (Amplitudes{0, 0, 0, 1}));
}

TEST(PauliMatrix, MatchesKroneckerOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 4;
    const PauliString p = random_pauli(n, rng);
    const oracle::Mat expected = oracle::pauli_string(p.str());
    const oracle::Mat got = oracle::dense(pauli_matrix(p));
    EXPECT_EQ((expected - got).cwiseAbs().maxCoeff(), 0.0) << p.str();
  }
}

TEST(PauliMatrix, SquaresToIdentityExactly) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const PauliString p = random_pauli(1 + trial % 5, rng);
    const auto op = pauli_matrix(p);
    Amplitudes v(op.dimension());
    for (std::size_t b = 0; b < v.size(); ++b) {
      std::fill(v.begin(), v.end(), Complex{});
      v[b] = 1.0;
      Amplitudes once(v.size());
      Amplitudes twice(v.size());
      apply_into(op, v, once);
      apply_into(op, once, twice);
      EXPECT_EQ(twice, v);
    }
  }
}

TEST(PauliMatrix, SizeOverflow) {
  EXPECT_THROW(pauli_matrix(PauliString::parse("XXXX"), 3), Error);
}

TEST(HermitianOperator, RejectsNonHermitianEntries) {
  EXPECT_THROW(HermitianOperator::from_entries(2, {{0, 1, 1.0}}), Error);
  EXPECT_THROW(HermitianOperator::from_entries(2, {{0, 1, Complex(0, 1)}, {1, 0, Complex(0, 1)}}), Error);
  EXPECT_THROW(HermitianOperator::from_entries(2, {{0, 0, Complex(1, 1)}}), Error);
  EXPECT_NO_THROW(HermitianOperator::from_entries(2, {{0, 1, Complex(0, 1)}, {1, 0, Complex(0, -1)}}));
}

TEST(HermitianOperator, MergesDuplicatesAndDropsZeros) {
  const auto op = HermitianOperator::from_entries(
      2, {{1, 1, 2.0}, {0, 0, 1.0}, {1, 1, -2.0}, {0, 0, 0.5}, {0, 1, 0.0}, {1, 0, 0.0}});
  ASSERT_EQ(op.nonzeros(), 1U);
  EXPECT_EQ(op.entries()[0], (MatrixEntry{0, 0, 1.5}));
}

TEST(HermitianOperator, SandwichSymmetryOnRandomVectors) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const auto h = oracle::to_operator(oracle::random_hermitian(8, rng));
    const auto u = oracle::to_amps(oracle::random_state(3, rng));
    const auto v = oracle::to_amps(oracle::random_state(3, rng));
    Amplitudes hv(8);
    Amplitudes hu(8);
    apply_into(h, v, hv);
    apply_into(h, u, hu);
    EXPECT_LT(std::abs(inner_product(u, hv) - std::conj(inner_product(v, hu))), 1e-12);
  }
}

TEST(Apply, SpecExamples) {
  const auto psi = plus();
  EXPECT_EQ(apply(HermitianOperator::identity(2), psi), Amplitudes(psi.amplitudes().begin(), psi.amplitudes().end()));
  const auto minus_x = HermitianOperator::from_entries(2, {{0, 1, -1.0}, {1, 0, -1.0}});
  const auto out = apply(minus_x, psi);
  EXPECT_NEAR(out[0].real(), -kR, 1e-15);
  EXPECT_NEAR(out[1].real(), -kR, 1e-15);
  const auto zero = apply(build_ising(PartitionInstance({1, 1})), QuantumState::basis(2, 1));
  EXPECT_EQ(zero, (Amplitudes{0, 0, 0, 0}));
  EXPECT_THROW(apply(HermitianOperator::identity(4), psi), Error);
}

TEST(InnerProduct, SpecExamples) {
  std::mt19937_64 rng(14);
  const QuantumState psi(oracle::to_amps(oracle::random_state(3, rng)));
  EXPECT_NEAR(std::abs(inner_product(psi, psi) - 1.0), 0.0, 1e-14);
  EXPECT_EQ(inner_product(QuantumState::basis(1, 0), QuantumState::basis(1, 1)), Complex(0.0));
  EXPECT_NEAR(inner_product(plus(), QuantumState::basis(1, 0)).real(), kR, 1e-15);
  EXPECT_THROW(inner_product(plus(), QuantumState::basis(2, 0)), Error);
}

TEST(InnerProduct, ConjugateLinearInFirstArgument) {
  const QuantumState a({Complex(0, 1), 0.0});
  const QuantumState b({1.0, 0.0});
  EXPECT_EQ(inner_product(a, b), Complex(0, -1));
}

TEST(Expectation, SpecExamples) {
  EXPECT_NEAR(pauli_expectation(plus(), PauliString::parse("X")), 1.0, 1e-15);
  EXPECT_NEAR(pauli_expectation(plus(), PauliString::parse("Z")), 0.0, 1e-15);
  EXPECT_EQ(expectation(QuantumState::basis(2, 1), build_ising(PartitionInstance({1, 1}))), 0.0);
}

TEST(Expectation, PauliShortcutMatchesMatrixAndStaysInRange) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 5;
    const QuantumState psi(oracle::to_amps(oracle::random_state(n, rng)));
    const PauliString p = random_pauli(n, rng);
    const oracle::Vec v = oracle::to_vec(psi.amplitudes());
    const double expected = (v.adjoint() * oracle::pauli_string(p.str()) * v)(0, 0).real();
    const double fast = pauli_expectation(psi, p);
    EXPECT_NEAR(fast, expected, 1e-12);
    EXPECT_NEAR(expectation(psi, pauli_matrix(p)), expected, 1e-12);
    EXPECT_LE(std::abs(fast), 1.0 + 1e-10);
  }
}

TEST(ProductState, SpecExamples) {
  std::vector<QubitFactor> uniform(4, QubitFactor{kR, kR});
  const auto psi = product_state(uniform);
  for (auto a : psi.amplitudes()) EXPECT_NEAR(a.real(), 0.25, 1e-15);
  std::vector<QubitFactor> zero{{1.0, 0.0}};
  EXPECT_EQ(product_state(zero)[0], Complex(1.0));
  std::vector<QubitFactor> zero_one{{1.0, 0.0}, {0.0, 1.0}};
  EXPECT_EQ(product_state(zero_one)[1], Complex(1.0));
  std::vector<QubitFactor> bad{{1.0, 0.1}};
  EXPECT_THROW(product_state(bad), Error);
}

TEST(ProductState, MatchesKroneckerAndKeepsUnitNorm) {
  std::mt19937_64 rng(16);
  for (int n : {2, 5, 12, 20}) {
    std::vector<QubitFactor> factors;
    oracle::Mat kron = oracle::Mat::Identity(1, 1);
    for (int q = 0; q < n; ++q) {
      const oracle::Vec f = oracle::random_state(1, rng);
      factors.push_back({f(0), f(1)});
      if (n <= 5) kron = oracle::kron(kron, oracle::Mat(f));
    }
    const auto psi = product_state(factors);
    EXPECT_NEAR(psi.norm(), 1.0, 1e-12);
    if (n <= 5) EXPECT_LT((oracle::to_vec(psi.amplitudes()) - kron.col(0)).norm(), 1e-14);
  }
}

TEST(Fidelity, GlobalPhaseInvariant) {
  const QuantumState a({kR, Complex(0, kR)});
  const QuantumState b({Complex(0, kR), -kR});
  EXPECT_NEAR(fidelity(a, b), 1.0, 1e-15);
  EXPECT_NEAR(distance_squared(a.amplitudes(), a.amplitudes()), 0.0, 0.0);
}
