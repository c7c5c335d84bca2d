#pragma once
// Classical ground truth for number partitioning: spin evaluation, O(N)
// verification and exhaustive search.

#include <cstdint>
#include <vector>

#include "qlab/hamiltonian.hpp"

namespace qlab {

/// Spins y_1..y_N, each +1 or -1.
struct SpinAssignment {
  std::vector<int> values;

  /// Bit 0 of qubit i maps to y_i = +1, bit 1 to -1.
  static SpinAssignment from_basis_index(int n, std::uint64_t index);
  std::uint64_t basis_index() const;
  SpinAssignment flipped() const;
  friend bool operator==(const SpinAssignment&, const SpinAssignment&) = default;
};

/// (sum_i n_i y_i)^2. Integral instances are summed in exact integer arithmetic.
double evaluate_ising(const SpinAssignment& assignment, const PartitionInstance& instance);

/// Operations charged to one verification: N multiply-adds plus the square.
constexpr std::uint64_t verification_op_count(int n) { return static_cast<std::uint64_t>(n) + 1; }

/// True iff the assignment is a perfect partition: exact zero for integral
/// weights, otherwise within 1e-9 (sum n_i)^2.
bool verify_zero_ground(const SpinAssignment& assignment, const PartitionInstance& instance);

struct PartitionSolution {
  double min_value = 0.0;
  /// Every optimal assignment, ordered by basis index; closed under the global flip.
  std::vector<SpinAssignment> optimal_assignments;
  bool is_perfect = false;

  std::vector<std::uint64_t> optimal_indices() const;
};

inline constexpr int kBruteForceMaxQubits = 24;

/// Exhaustive optimum over 2^(N-1) assignments (y_1 fixed, mirrors added
/// afterwards), split over `jobs` threads. Throws CapExceeded above 24 spins.
PartitionSolution brute_force(const PartitionInstance& instance, unsigned jobs = 1);

/// Born-rule sample of a basis index, returned as spins. Deterministic in seed.
SpinAssignment measure_basis(const QuantumState& state, std::uint64_t seed);

}  // namespace qlab
