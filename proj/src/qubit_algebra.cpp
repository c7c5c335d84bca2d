#include "qlab/qubit_algebra.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "qlab/error.hpp"

namespace qlab {
namespace {

constexpr std::string_view kModule = "qubit_algebra";
constexpr double kNormTolerance = 1e-12;
constexpr double kFactorTolerance = 1e-10;
constexpr double kDriftTolerance = 1e-10;

int log2_exact(std::size_t dimension) {
  if (dimension == 0 || !std::has_single_bit(dimension)) {
    throw Error(ErrorCode::kDimensionMismatch, kModule,
                "dimension " + std::to_string(dimension) + " is not a power of two");
  }
  return std::countr_zero(dimension);
}

// Action of a Pauli string on a basis state: P|b> = phase(b) |b ^ flip_mask>.
struct PauliAction {
  std::uint64_t flip_mask = 0;
  std::uint64_t sign_mask = 0;
  Complex global = 1.0;

  explicit PauliAction(const PauliString& string) {
    const int n = static_cast<int>(string.size());
    int y_count = 0;
    for (int q = 0; q < n; ++q) {
      const auto bit = qubit_mask(n, q);
      switch (string[q]) {
        case Pauli::kI: break;
        case Pauli::kX: flip_mask |= bit; break;
        case Pauli::kY:
          flip_mask |= bit;
          sign_mask |= bit;
          ++y_count;
          break;
        case Pauli::kZ: sign_mask |= bit; break;
      }
    }
    static constexpr std::array<Complex, 4> kPowersOfI = {
        Complex{1, 0}, Complex{0, 1}, Complex{-1, 0}, Complex{0, -1}};
    global = kPowersOfI[y_count % 4];
  }

  Complex phase(std::uint64_t b) const {
    return (std::popcount(b & sign_mask) & 1) ? -global : global;
  }
};

}  // namespace

void check_qubit_count(int n, int max_qubits, std::string_view module) {
  if (n < 1 || n > max_qubits) {
    throw Error(ErrorCode::kSizeOverflow, module,
                "qubit count " + std::to_string(n) + " outside [1, " +
                    std::to_string(max_qubits) + "]");
  }
}

// --- QuantumState -----------------------------------------------------------

QuantumState::QuantumState(Amplitudes amplitudes, Unchecked)
    : num_qubits_(log2_exact(amplitudes.size())), amplitudes_(std::move(amplitudes)) {}

QuantumState::QuantumState(Amplitudes amplitudes)
    : QuantumState(std::move(amplitudes), Unchecked{}) {
  const double n = norm();
  if (std::abs(n - 1.0) > kNormTolerance) {
    throw Error(ErrorCode::kInvalidArgument, kModule,
                "state norm " + std::to_string(n) + " differs from 1 by more than 1e-12");
  }
}

QuantumState QuantumState::unnormalized(Amplitudes amplitudes) {
  return QuantumState(std::move(amplitudes), Unchecked{});
}

QuantumState QuantumState::basis(int num_qubits, std::uint64_t index) {
  check_qubit_count(num_qubits, 63, kModule);
  const std::size_t dim = std::size_t{1} << num_qubits;
  if (index >= dim) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "basis index out of range");
  }
  Amplitudes amps(dim);
  amps[index] = 1.0;
  return QuantumState(std::move(amps));
}

double QuantumState::norm() const {
  double sum = 0.0;
  for (const auto& a : amplitudes_) sum += std::norm(a);
  return std::sqrt(sum);
}

// --- PauliString ------------------------------------------------------------

PauliString PauliString::parse(std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::kParseError, kModule, "empty Pauli string");
  std::vector<Pauli> letters;
  letters.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case 'I': letters.push_back(Pauli::kI); break;
      case 'X': letters.push_back(Pauli::kX); break;
      case 'Y': letters.push_back(Pauli::kY); break;
      case 'Z': letters.push_back(Pauli::kZ); break;
      default:
        throw Error(ErrorCode::kParseError, kModule,
                    "invalid Pauli letter '" + std::string(1, c) + "'");
    }
  }
  return PauliString(std::move(letters));
}

PauliString PauliString::single(int n, int site, Pauli letter) {
  std::vector<Pauli> letters(static_cast<std::size_t>(n), Pauli::kI);
  letters.at(static_cast<std::size_t>(site)) = letter;
  return PauliString(std::move(letters));
}

bool PauliString::is_identity() const {
  return std::all_of(letters_.begin(), letters_.end(), [](Pauli p) { return p == Pauli::kI; });
}

std::string PauliString::str() const {
  static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
  std::string out;
  out.reserve(letters_.size());
  for (Pauli p : letters_) out.push_back(kLetters[static_cast<int>(p)]);
  return out;
}

// --- HermitianOperator ------------------------------------------------------

HermitianOperator HermitianOperator::from_entries(std::size_t dimension,
                                                  std::vector<MatrixEntry> entries) {
  log2_exact(dimension);
  std::stable_sort(entries.begin(), entries.end(), [](const MatrixEntry& a, const MatrixEntry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  HermitianOperator op;
  op.dimension_ = dimension;
  op.entries_.reserve(entries.size());
  for (const auto& e : entries) {
    if (e.row >= dimension || e.col >= dimension) {
      throw Error(ErrorCode::kDimensionMismatch, kModule, "entry coordinate out of range");
    }
    if (!op.entries_.empty() && op.entries_.back().row == e.row &&
        op.entries_.back().col == e.col) {
      op.entries_.back().value += e.value;
    } else {
      op.entries_.push_back(e);
    }
  }
  std::erase_if(op.entries_, [](const MatrixEntry& e) { return e.value == Complex{0.0, 0.0}; });

  for (const auto& e : op.entries_) {
    if (op.at(e.col, e.row) != std::conj(e.value)) {
      throw Error(ErrorCode::kNotHermitian, kModule,
                  "entry (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                      ") has no matching conjugate-transpose partner");
    }
  }
  return op;
}

HermitianOperator HermitianOperator::identity(std::size_t dimension) {
  std::vector<MatrixEntry> entries(dimension);
  for (std::size_t i = 0; i < dimension; ++i) entries[i] = {i, i, 1.0};
  return from_entries(dimension, std::move(entries));
}

HermitianOperator HermitianOperator::diagonal(std::span<const double> values) {
  std::vector<MatrixEntry> entries;
  entries.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) entries.push_back({i, i, values[i]});
  return from_entries(values.size(), std::move(entries));
}

int HermitianOperator::num_qubits() const { return log2_exact(dimension_); }

Complex HermitianOperator::at(std::uint64_t row, std::uint64_t col) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair{row, col},
                             [](const MatrixEntry& e, const std::pair<std::uint64_t, std::uint64_t>& key) {
                               return e.row != key.first ? e.row < key.first : e.col < key.second;
                             });
  if (it != entries_.end() && it->row == row && it->col == col) return it->value;
  return 0.0;
}

std::vector<double> HermitianOperator::diagonal_values() const {
  std::vector<double> diag(dimension_, 0.0);
  for (const auto& e : entries_) {
    if (e.row == e.col) diag[e.row] = e.value.real();
  }
  return diag;
}

bool HermitianOperator::is_real() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const MatrixEntry& e) { return e.value.imag() == 0.0; });
}

bool HermitianOperator::is_diagonal() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const MatrixEntry& e) { return e.row == e.col; });
}

// --- operations -------------------------------------------------------------

HermitianOperator pauli_matrix(const PauliString& string, int max_qubits) {
  if (string.size() == 0) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "empty Pauli string");
  }
  const int n = static_cast<int>(string.size());
  check_qubit_count(n, max_qubits, kModule);
  const PauliAction action(string);
  const std::size_t dim = std::size_t{1} << n;
  std::vector<MatrixEntry> entries(dim);
  for (std::uint64_t row = 0; row < dim; ++row) {
    const std::uint64_t col = row ^ action.flip_mask;
    entries[row] = {row, col, action.phase(col)};
  }
  return HermitianOperator::from_entries(dim, std::move(entries));
}

void apply_into(const HermitianOperator& op, std::span<const Complex> in, std::span<Complex> out,
                Complex scale, bool accumulate) {
  if (in.size() != op.dimension() || out.size() != op.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch, kModule,
                "operator dimension " + std::to_string(op.dimension()) + " vs vector length " +
                    std::to_string(in.size()));
  }
  if (!accumulate) std::fill(out.begin(), out.end(), Complex{0.0, 0.0});
  for (const auto& e : op.entries()) out[e.row] += scale * e.value * in[e.col];
}

Amplitudes apply(const HermitianOperator& op, const QuantumState& state) {
  Amplitudes out(state.dimension());
  apply_into(op, state.amplitudes(), out);
  return out;
}

Complex inner_product(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch, kModule, "inner product of unequal lengths");
  }
  Complex sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::conj(a[i]) * b[i];
  return sum;
}

Complex inner_product(const QuantumState& a, const QuantumState& b) {
  return inner_product(a.amplitudes(), b.amplitudes());
}

double expectation(const QuantumState& state, const HermitianOperator& op) {
  const Amplitudes h_psi = apply(op, state);
  const Complex value = inner_product(state.amplitudes(), h_psi);
  if (std::abs(value.imag()) >= kDriftTolerance) {
    throw Error(ErrorCode::kNonHermitianDrift, kModule,
                "imaginary part " + std::to_string(value.imag()) + " of expectation value");
  }
  return value.real();
}

double pauli_expectation(const QuantumState& state, const PauliString& string) {
  if (static_cast<int>(string.size()) != state.num_qubits()) {
    throw Error(ErrorCode::kDimensionMismatch, kModule, "Pauli string length vs qubit count");
  }
  const PauliAction action(string);
  const auto amps = state.amplitudes();
  Complex sum = 0.0;
  for (std::uint64_t b = 0; b < amps.size(); ++b) {
    sum += std::conj(amps[b ^ action.flip_mask]) * action.phase(b) * amps[b];
  }
  if (std::abs(sum.imag()) >= kDriftTolerance) {
    throw Error(ErrorCode::kNonHermitianDrift, kModule, "imaginary Pauli expectation");
  }
  return sum.real();
}

QuantumState product_state(std::span<const QubitFactor> factors) {
  if (factors.empty()) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "no factors");
  }
  check_qubit_count(static_cast<int>(factors.size()), 63, kModule);
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const double n2 = std::norm(factors[i][0]) + std::norm(factors[i][1]);
    if (std::abs(n2 - 1.0) > kFactorTolerance) {
      throw Error(ErrorCode::kUnnormalizedFactor, kModule,
                  "factor " + std::to_string(i) + " has squared norm " + std::to_string(n2));
    }
  }
  // Kronecker product, qubit 0 outermost. Factors are within 1e-10 of unit
  // norm; rescaling them keeps the product inside the 1e-12 state tolerance.
  Amplitudes amps{1.0};
  for (const auto& f : factors) {
    const double scale = 1.0 / std::sqrt(std::norm(f[0]) + std::norm(f[1]));
    Amplitudes next(amps.size() * 2);
    for (std::size_t b = 0; b < amps.size(); ++b) {
      next[2 * b] = amps[b] * f[0] * scale;
      next[2 * b + 1] = amps[b] * f[1] * scale;
    }
    amps = std::move(next);
  }
  return QuantumState(std::move(amps));
}

double distance_squared(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch, kModule, "distance of unequal lengths");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::norm(a[i] - b[i]);
  return sum;
}

double fidelity(const QuantumState& a, const QuantumState& b) {
  return std::norm(inner_product(a, b));
}

}  // namespace qlab
