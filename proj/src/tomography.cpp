#include "qlab/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "qlab/error.hpp"
#include "qlab/numerics.hpp"

namespace qlab {
namespace {

constexpr std::string_view kModule = "tomography_lab";
constexpr double kBlochLimit = 1.05;

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

QubitFactor bloch_to_factor(std::array<double, 3> n, int qubit) {
  const double r = std::hypot(n[0], n[1], n[2]);
  if (r > kBlochLimit) {
    std::ostringstream msg;
    msg << "Bloch vector of qubit " << qubit << " has norm " << r << " > " << kBlochLimit;
    throw Error(ErrorCode::kInconsistentRecords, kModule, msg.str());
  }
  // Nearest pure state; a vanishing vector carries no direction, so |0> stands in.
  if (r == 0.0) return {1.0, 0.0};
  for (double& x : n) x /= r;
  const double a1 = std::sqrt(std::max(0.0, 0.5 * (1.0 + n[2])));
  const double mag2 = std::sqrt(std::max(0.0, 0.5 * (1.0 - n[2])));
  const double phi = (n[0] == 0.0 && n[1] == 0.0) ? 0.0 : std::atan2(n[1], n[0]);
  return {Complex{a1, 0.0}, std::polar(mag2, phi)};
}

}  // namespace

std::uint64_t observable_seed(std::uint64_t seed, const PauliString& observable) {
  return seed ^ fnv1a(observable.str());
}

MeasurementRecord simulate_measurement(const QuantumState& state, const PauliString& observable,
                                       std::uint64_t shots, std::uint64_t seed) {
  if (observable.is_identity()) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "all-identity observable has no outcome");
  }
  if (shots == 0) throw Error(ErrorCode::kInvalidArgument, kModule, "shots must be >= 1");
  const double p = std::clamp(0.5 * (1.0 + pauli_expectation(state, observable)), 0.0, 1.0);
  std::mt19937_64 rng(observable_seed(seed, observable));
  std::binomial_distribution<std::uint64_t> draw(shots, p);
  MeasurementRecord record;
  record.observable = observable;
  record.shots = shots;
  record.count_plus = draw(rng);
  record.estimate = (2.0 * static_cast<double>(record.count_plus) - static_cast<double>(shots)) /
                    static_cast<double>(shots);
  return record;
}

std::vector<BlochRecords> measure_product(const QuantumState& state, std::uint64_t shots,
                                          std::uint64_t seed) {
  const int n = state.num_qubits();
  std::vector<BlochRecords> out(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) {
    int k = 0;
    for (Pauli letter : {Pauli::kX, Pauli::kY, Pauli::kZ}) {
      out[static_cast<std::size_t>(q)][static_cast<std::size_t>(k++)] =
          simulate_measurement(state, PauliString::single(n, q, letter), shots, seed);
    }
  }
  return out;
}

std::array<double, 3> bloch_vector(const BlochRecords& records) {
  return {records[0].estimate, records[1].estimate, records[2].estimate};
}

QuantumState reconstruct_product_state(std::span<const std::array<double, 3>> bloch) {
  if (bloch.empty()) throw Error(ErrorCode::kInvalidArgument, kModule, "no qubits to reconstruct");
  std::vector<QubitFactor> factors;
  factors.reserve(bloch.size());
  for (std::size_t q = 0; q < bloch.size(); ++q) {
    factors.push_back(bloch_to_factor(bloch[q], static_cast<int>(q)));
  }
  return product_state(factors);
}

QuantumState reconstruct_product_state(std::span<const BlochRecords> records) {
  const int n = static_cast<int>(records.size());
  std::vector<std::array<double, 3>> bloch;
  for (int q = 0; q < n; ++q) {
    const auto& triple = records[static_cast<std::size_t>(q)];
    int k = 0;
    for (Pauli letter : {Pauli::kX, Pauli::kY, Pauli::kZ}) {
      if (triple[static_cast<std::size_t>(k++)].observable != PauliString::single(n, q, letter)) {
        throw Error(ErrorCode::kInconsistentRecords, kModule,
                    "record triple " + std::to_string(q) + " is not X, Y, Z on that qubit");
      }
    }
    bloch.push_back(bloch_vector(triple));
  }
  return reconstruct_product_state(bloch);
}

std::vector<PauliString> all_pauli_strings(int n) {
  check_qubit_count(n, 12, kModule);
  const std::uint64_t count = std::uint64_t{1} << (2 * n);
  std::vector<PauliString> out;
  out.reserve(count - 1);
  for (std::uint64_t code = 1; code < count; ++code) {
    std::vector<Pauli> letters(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
      letters[static_cast<std::size_t>(q)] = static_cast<Pauli>((code >> (2 * (n - 1 - q))) & 3U);
    }
    out.emplace_back(std::move(letters));
  }
  return out;
}

std::vector<MeasurementRecord> measure_full(const QuantumState& state, std::uint64_t shots,
                                            std::uint64_t seed, unsigned jobs) {
  const auto strings = all_pauli_strings(state.num_qubits());
  std::vector<MeasurementRecord> out(strings.size());
  parallel_for(strings.size(), jobs,
               [&](std::size_t i) { out[i] = simulate_measurement(state, strings[i], shots, seed); });
  return out;
}

Eigen::MatrixXcd full_state_reconstruct(const std::map<PauliString, double>& expectations, int n) {
  check_qubit_count(n, 12, kModule);
  std::vector<std::string> missing;
  for (const auto& p : all_pauli_strings(n)) {
    if (!expectations.contains(p)) missing.push_back(p.str());
  }
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << missing.size() << " Pauli strings missing:";
    for (const auto& s : missing) msg << ' ' << s;
    throw Error(ErrorCode::kMissingPauliStrings, kModule, msg.str());
  }
  const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto& [p, value] : expectations) {
    if (static_cast<int>(p.size()) != n) {
      throw Error(ErrorCode::kDimensionMismatch, kModule, "Pauli string " + p.str() + " length");
    }
    if (p.is_identity()) continue;
    const HermitianOperator op = pauli_matrix(p);
    for (const auto& e : op.entries()) {
      rho(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) += value * e.value;
    }
  }
  rho /= static_cast<double>(dim);
  const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
  return herm;
}

QuantumState dominant_state(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kConvergenceFailure, kModule, "density matrix eigensolver failed");
  }
  Eigen::VectorXcd v = es.eigenvectors().col(rho.rows() - 1);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      v *= std::conj(v(i)) / std::abs(v(i));
      break;
    }
  }
  v /= v.norm();
  return QuantumState(Amplitudes(v.data(), v.data() + v.size()));
}

double min_eigenvalue(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

std::string_view to_string(TomographyMode mode) {
  return mode == TomographyMode::kFull ? "full" : "product";
}

TomographyMode parse_tomography_mode(std::string_view text) {
  if (text == "full") return TomographyMode::kFull;
  if (text == "product") return TomographyMode::kProduct;
  throw Error(ErrorCode::kParseError, kModule, "unknown mode '" + std::string(text) + "'");
}

TomographyBudget budget(TomographyMode mode, int n) {
  check_qubit_count(n, 31, kModule);
  TomographyBudget b{mode, n, 0};
  b.operation_count = mode == TomographyMode::kFull ? (std::uint64_t{1} << (2 * n)) - 1
                                                    : 3 * static_cast<std::uint64_t>(n);
  return b;
}

std::vector<QubitFactor> random_product_factors(int n, std::uint64_t seed) {
  check_qubit_count(n, kDefaultMaxQubits, kModule);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<QubitFactor> out;
  for (int q = 0; q < n; ++q) {
    const double z = 2.0 * unit(rng) - 1.0;
    const double phi = 2.0 * std::numbers::pi * unit(rng);
    out.push_back({Complex{std::sqrt(0.5 * (1.0 + z)), 0.0},
                   std::polar(std::sqrt(0.5 * (1.0 - z)), phi)});
  }
  return out;
}

}  // namespace qlab
