#include "qlab/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qlab/error.hpp"

namespace qlab {
namespace {

constexpr std::string_view kModule = "hamiltonian_builder";

// 1-based line of the index-th element of the top-level "weights" array, or 0
// when the text cannot be walked (the caller then reports the index only).
std::size_t json_element_line(std::string_view text, std::size_t index) {
  const auto key = text.find("\"weights\"");
  if (key == std::string_view::npos) return 0;
  auto pos = text.find('[', key);
  if (pos == std::string_view::npos) return 0;
  std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + pos, '\n'));
  std::size_t element = 0;
  int depth = 0;
  bool at_element_start = true;
  for (++pos; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c == '\n') {
      ++line;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') continue;
    if (at_element_start && depth == 0) {
      if (element == index) return line;
      at_element_start = false;
    }
    if (c == '[' || c == '{') ++depth;
    if (c == '}') --depth;
    if (c == ']') {
      if (depth == 0) return 0;
      --depth;
    }
    if (c == ',' && depth == 0) {
      ++element;
      at_element_start = true;
    }
  }
  return 0;
}

PartitionInstance parse_json_instance(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, kModule, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("weights") || !doc["weights"].is_array()) {
    throw Error(ErrorCode::kParseError, kModule, "expected an object with a \"weights\" array");
  }
  std::vector<double> weights;
  const auto& arr = doc["weights"];
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::size_t line = json_element_line(text, i);
    const std::string where = line ? "line " + std::to_string(line) + ": " : "";
    if (!arr[i].is_number()) {
      throw Error(ErrorCode::kParseError, kModule,
                  where + "weights[" + std::to_string(i) + "] is not a number");
    }
    const double w = arr[i].get<double>();
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::kParseError, kModule,
                  where + "weights[" + std::to_string(i) + "] = " + arr[i].dump() +
                      " is not a positive number");
    }
    weights.push_back(w);
  }
  return PartitionInstance(std::move(weights));
}

PartitionInstance parse_text_instance(std::string_view text) {
  std::vector<double> weights;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw.substr(0, raw.find('#'));
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    double w = 0.0;
    std::size_t used = 0;
    try {
      w = std::stod(line, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != line.size()) {
      throw Error(ErrorCode::kParseError, kModule,
                  "line " + std::to_string(line_no) + ": '" + line + "' is not a number");
    }
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::kParseError, kModule,
                  "line " + std::to_string(line_no) + ": weight " + line +
                      " is not a positive number");
    }
    weights.push_back(w);
  }
  return PartitionInstance(std::move(weights));
}

}  // namespace

// --- PartitionInstance ------------------------------------------------------

PartitionInstance::PartitionInstance(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, kModule,
                "a partition instance needs at least two weights");
  }
  integral_ = true;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double w = weights_[i];
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::kInvalidArgument, kModule,
                  "weight " + std::to_string(i) + " is not positive");
    }
    if (w != std::floor(w) || w >= 2147483648.0) integral_ = false;
  }
}

double PartitionInstance::total() const {
  double sum = 0.0;
  for (double w : weights_) sum += w;
  return sum;
}

std::vector<std::int64_t> PartitionInstance::integer_weights() const {
  if (!integral_) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "instance has non-integer weights");
  }
  std::vector<std::int64_t> out(weights_.size());
  std::transform(weights_.begin(), weights_.end(), out.begin(),
                 [](double w) { return static_cast<std::int64_t>(w); });
  return out;
}

// --- ScheduleSpec -----------------------------------------------------------

ScheduleSpec::ScheduleSpec(double total_time_, std::size_t num_steps_)
    : total_time(total_time_), num_steps(num_steps_) {
  if (!(total_time >= 0.0) || !std::isfinite(total_time)) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "total time must be finite and >= 0");
  }
  if (num_steps == 0) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "num_steps must be positive");
  }
}

double ScheduleSpec::s_at(double t) const {
  if (total_time == 0.0) return 1.0;
  return std::clamp(t / total_time, 0.0, 1.0);
}

// --- Hamiltonians -----------------------------------------------------------

HermitianOperator build_transverse(int n, int max_qubits) {
  if (n < 2) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "transverse field needs N >= 2");
  }
  check_qubit_count(n, max_qubits, kModule);
  const std::size_t dim = std::size_t{1} << n;
  std::vector<MatrixEntry> entries;
  entries.reserve(dim * static_cast<std::size_t>(n));
  for (std::uint64_t b = 0; b < dim; ++b) {
    for (int q = 0; q < n; ++q) entries.push_back({b, b ^ qubit_mask(n, q), -1.0});
  }
  return HermitianOperator::from_entries(dim, std::move(entries));
}

HermitianOperator build_ising(const PartitionInstance& instance, int max_qubits) {
  const int n = instance.size();
  check_qubit_count(n, max_qubits, kModule);
  const auto w = instance.weights();
  std::vector<double> couplings(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) couplings[i * n + j] = w[i] * w[j];
  }
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> diag(dim);
  std::vector<double> spin(static_cast<std::size_t>(n));
  for (std::uint64_t b = 0; b < dim; ++b) {
    for (int q = 0; q < n; ++q) spin[q] = (b & qubit_mask(n, q)) ? -1.0 : 1.0;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) sum += couplings[i * n + j] * spin[i] * spin[j];
    }
    diag[b] = sum;
  }
  return HermitianOperator::diagonal(diag);
}

HermitianOperator interpolate(const HermitianOperator& h_trans, const HermitianOperator& h_ising,
                              double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, kModule,
                "interpolation parameter " + std::to_string(s) + " outside [0, 1]");
  }
  if (h_trans.dimension() != h_ising.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch, kModule, "interpolating operators of unequal size");
  }
  const double a = 1.0 - s;
  const auto lhs = h_trans.entries();
  const auto rhs = h_ising.entries();
  std::vector<MatrixEntry> merged;
  merged.reserve(lhs.size() + rhs.size());
  std::size_t i = 0;
  std::size_t j = 0;
  auto before = [](const MatrixEntry& x, const MatrixEntry& y) {
    return x.row != y.row ? x.row < y.row : x.col < y.col;
  };
  while (i < lhs.size() || j < rhs.size()) {
    if (j == rhs.size() || (i < lhs.size() && before(lhs[i], rhs[j]))) {
      merged.push_back({lhs[i].row, lhs[i].col, a * lhs[i].value});
      ++i;
    } else if (i == lhs.size() || before(rhs[j], lhs[i])) {
      merged.push_back({rhs[j].row, rhs[j].col, s * rhs[j].value});
      ++j;
    } else {
      merged.push_back({lhs[i].row, lhs[i].col, a * lhs[i].value + s * rhs[j].value});
      ++i;
      ++j;
    }
  }
  return HermitianOperator::from_entries(h_trans.dimension(), std::move(merged));
}

QuantumState initial_state(int n, int max_qubits) {
  check_qubit_count(n, max_qubits, kModule);
  const std::size_t dim = std::size_t{1} << n;
  // 2^{-N/2} directly; the product of N factors of 1/sqrt(2) rounds differently.
  const double amp = std::exp2(-0.5 * n);
  return QuantumState(Amplitudes(dim, Complex{amp, 0.0}));
}

HermitianOperator global_flip(int n, int max_qubits) {
  return pauli_matrix(PauliString(std::vector<Pauli>(static_cast<std::size_t>(n), Pauli::kX)),
                      max_qubits);
}

double transverse_commutator_bound(std::span<const double> ising_diagonal) {
  const std::size_t dim = ising_diagonal.size();
  double bound = 0.0;
  for (std::size_t mask = 1; mask < dim; mask <<= 1) {
    double jump = 0.0;
    for (std::size_t b = 0; b < dim; ++b) {
      jump = std::max(jump, std::abs(ising_diagonal[b] - ising_diagonal[b ^ mask]));
    }
    bound += jump;
  }
  return bound;
}

// --- instance files and generators ------------------------------------------

PartitionInstance parse_instance(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return parse_json_instance(text);
  return parse_text_instance(text);
}

PartitionInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, kModule, "cannot read instance file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

std::string instance_to_json(const PartitionInstance& instance) {
  nlohmann::json doc;
  doc["weights"] = std::vector<double>(instance.weights().begin(), instance.weights().end());
  return doc.dump();
}

std::string_view to_string(WeightDistribution dist) {
  return dist == WeightDistribution::kUniformInt ? "uniform-int" : "uniform-real";
}

WeightDistribution parse_distribution(std::string_view text) {
  if (text == "uniform-int") return WeightDistribution::kUniformInt;
  if (text == "uniform-real") return WeightDistribution::kUniformReal;
  throw Error(ErrorCode::kParseError, kModule,
              "unknown weight distribution '" + std::string(text) + "'");
}

PartitionInstance generate_instance(const GeneratorSpec& spec) {
  if (spec.n < 2) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "generated instances need N >= 2");
  }
  check_qubit_count(spec.n, kDefaultMaxQubits, kModule);
  std::mt19937_64 rng(spec.seed);
  std::vector<double> weights(static_cast<std::size_t>(spec.n));
  if (spec.distribution == WeightDistribution::kUniformInt) {
    const std::int64_t hi = spec.max_weight > 0 ? spec.max_weight : (std::int64_t{1} << spec.n);
    std::uniform_int_distribution<std::int64_t> dist(1, hi);
    for (auto& w : weights) w = static_cast<double>(dist(rng));
  } else {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (auto& w : weights) w = 1.0 - dist(rng);
  }
  return PartitionInstance(std::move(weights));
}

}  // namespace qlab
