#pragma once
// Simulated Pauli measurements and linear-inversion state reconstruction.

#include <array>
#include <cstdint>
#include <map>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qlab/qubit_algebra.hpp"

namespace qlab {

struct MeasurementRecord {
  PauliString observable;
  std::uint64_t shots = 0;
  std::uint64_t count_plus = 0;
  /// (2 c - C) / C.
  double estimate = 0.0;
};

/// Binomial(shots, (1 + <P>) / 2) draw of the +1 outcomes. The generator is
/// seeded with seed ^ fnv1a(P) so records do not depend on evaluation order.
MeasurementRecord simulate_measurement(const QuantumState& state, const PauliString& observable,
                                       std::uint64_t shots, std::uint64_t seed);

std::uint64_t observable_seed(std::uint64_t seed, const PauliString& observable);

/// Records for X, Y, Z on one qubit, in that order.
using BlochRecords = std::array<MeasurementRecord, 3>;

/// The 3N single-site settings of product-mode tomography.
std::vector<BlochRecords> measure_product(const QuantumState& state, std::uint64_t shots,
                                          std::uint64_t seed);

/// Sampled Bloch vector (<X>, <Y>, <Z>) of a record triple.
std::array<double, 3> bloch_vector(const BlochRecords& records);

/// Product state from per-qubit Bloch vectors. Vectors are projected onto
/// the unit sphere; a norm above 1.05 throws InconsistentRecords. Phase
/// convention: the |0> amplitude is real and >= 0, and when it vanishes the
/// |1> amplitude is real and >= 0.
QuantumState reconstruct_product_state(std::span<const std::array<double, 3>> bloch);
QuantumState reconstruct_product_state(std::span<const BlochRecords> records);

/// All 4^N - 1 non-identity Pauli strings in lexicographic (I < X < Y < Z) order.
std::vector<PauliString> all_pauli_strings(int n);

/// One record per non-identity Pauli string, simulated on `jobs` threads.
std::vector<MeasurementRecord> measure_full(const QuantumState& state, std::uint64_t shots,
                                            std::uint64_t seed, unsigned jobs = 1);

/// rho = 2^-N (I + sum_P <P> P), symmetrized so it is exactly Hermitian.
/// Throws MissingPauliStrings naming every absent string.
Eigen::MatrixXcd full_state_reconstruct(const std::map<PauliString, double>& expectations, int n);

/// Eigenvector of the largest eigenvalue of rho, with the product-state
/// phase convention applied to its first nonzero amplitude.
QuantumState dominant_state(const Eigen::MatrixXcd& rho);

/// Smallest eigenvalue of rho; negative values flag a non-physical estimate.
double min_eigenvalue(const Eigen::MatrixXcd& rho);

enum class TomographyMode { kFull, kProduct };

std::string_view to_string(TomographyMode mode);
TomographyMode parse_tomography_mode(std::string_view text);

struct TomographyBudget {
  TomographyMode mode = TomographyMode::kFull;
  int num_qubits = 1;
  std::uint64_t operation_count = 0;
};

/// Distinct measurement settings: 4^N - 1 (full) or 3N (product). N <= 31.
TomographyBudget budget(TomographyMode mode, int n);

/// Haar-random single-qubit factors, seeded.
std::vector<QubitFactor> random_product_factors(int n, std::uint64_t seed);

}  // namespace qlab
