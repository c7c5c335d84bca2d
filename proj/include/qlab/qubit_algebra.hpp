#pragma once

// N-qubit states, Pauli strings and sparse Hermitian operators.
//
// Basis convention used everywhere in qlab: qubit i is bit (N-1-i) of the
// basis index (qubit 0 is the most significant bit). Bit 0 is |z=0>, which
// carries spin y = +1; bit 1 is |z=1>, spin y = -1.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qlab {

using Complex = std::complex<double>;
using Amplitudes = std::vector<Complex>;

inline constexpr int kDefaultMaxQubits = 24;

/// Throws SizeOverflow unless 1 <= n <= max_qubits.
void check_qubit_count(int n, int max_qubits, std::string_view module);

/// Basis-index bit that holds qubit `qubit` in an `n`-qubit register.
constexpr std::uint64_t qubit_mask(int n, int qubit) {
  return std::uint64_t{1} << (n - 1 - qubit);
}

class QuantumState {
 public:
  /// Validates length 2^N and unit norm within 1e-12.
  explicit QuantumState(Amplitudes amplitudes);

  /// Length is validated, the norm is not. Evolved states carry their
  /// integration drift and are never renormalized.
  static QuantumState unnormalized(Amplitudes amplitudes);

  static QuantumState basis(int num_qubits, std::uint64_t index);

  int num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_[i]; }
  double norm() const;

 private:
  struct Unchecked {};
  QuantumState(Amplitudes amplitudes, Unchecked);

  int num_qubits_ = 0;
  Amplitudes amplitudes_;
};

enum class Pauli : std::uint8_t { kI, kX, kY, kZ };

class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::vector<Pauli> letters) : letters_(std::move(letters)) {}

  /// Parses letters over {I, X, Y, Z}, e.g. "XZI".
  static PauliString parse(std::string_view text);
  /// Single-site operator `letter` on qubit `site`, identity elsewhere.
  static PauliString single(int n, int site, Pauli letter);

  std::size_t size() const { return letters_.size(); }
  std::span<const Pauli> letters() const { return letters_; }
  Pauli operator[](std::size_t i) const { return letters_[i]; }
  bool is_identity() const;
  std::string str() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend auto operator<=>(const PauliString& a, const PauliString& b) {
    return a.letters_ <=> b.letters_;
  }

 private:
  std::vector<Pauli> letters_;
};

struct MatrixEntry {
  std::uint64_t row = 0;
  std::uint64_t col = 0;
  Complex value;

  friend bool operator==(const MatrixEntry&, const MatrixEntry&) = default;
};

/// Sparse Hermitian matrix in coordinate form, entries sorted row-major with
/// no duplicates and no explicit zeros. Construction verifies that the entry
/// set is closed under conjugate transpose, exactly.
class HermitianOperator {
 public:
  HermitianOperator() = default;

  /// Sorts, sums duplicate coordinates, drops exact zeros and validates.
  static HermitianOperator from_entries(std::size_t dimension, std::vector<MatrixEntry> entries);
  static HermitianOperator identity(std::size_t dimension);
  static HermitianOperator diagonal(std::span<const double> values);

  std::size_t dimension() const { return dimension_; }
  /// log2(dimension).
  int num_qubits() const;
  std::span<const MatrixEntry> entries() const { return entries_; }
  std::size_t nonzeros() const { return entries_.size(); }

  /// Entry lookup; zero when absent.
  Complex at(std::uint64_t row, std::uint64_t col) const;
  /// Dense real diagonal (imaginary parts are zero by Hermiticity).
  std::vector<double> diagonal_values() const;
  bool is_real() const;
  bool is_diagonal() const;

  friend bool operator==(const HermitianOperator&, const HermitianOperator&) = default;

 private:
  std::size_t dimension_ = 0;
  std::vector<MatrixEntry> entries_;
};

/// Kronecker lift of single-site Pauli matrices.
HermitianOperator pauli_matrix(const PauliString& string, int max_qubits = kDefaultMaxQubits);

/// out = scale * op * in (+ out if accumulate).
void apply_into(const HermitianOperator& op, std::span<const Complex> in, std::span<Complex> out,
                Complex scale = 1.0, bool accumulate = false);

Amplitudes apply(const HermitianOperator& op, const QuantumState& state);

/// <a|b>, conjugate-linear in a.
Complex inner_product(const QuantumState& a, const QuantumState& b);
Complex inner_product(std::span<const Complex> a, std::span<const Complex> b);

/// Re <state|op|state>; throws NonHermitianDrift when |Im| >= 1e-10.
double expectation(const QuantumState& state, const HermitianOperator& op);

/// <state|P|state> for a Pauli string without building the sparse matrix.
double pauli_expectation(const QuantumState& state, const PauliString& string);

using QubitFactor = std::array<Complex, 2>;

/// Tensor product |psi_1>...|psi_N>; each factor must be normalized within 1e-10.
QuantumState product_state(std::span<const QubitFactor> factors);

/// Sum of |a_i - b_i|^2 (squared Euclidean distance).
double distance_squared(std::span<const Complex> a, std::span<const Complex> b);

/// |<a|b>|^2.
double fidelity(const QuantumState& a, const QuantumState& b);

}  // namespace qlab
