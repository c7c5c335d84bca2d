#include "qlab/reality_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include "qlab/error.hpp"
#include "qlab/numerics.hpp"

namespace qlab {
namespace {

constexpr std::string_view kModule = "reality_oracle";

void check_length(const SpinAssignment& assignment, const PartitionInstance& instance) {
  if (assignment.values.size() != static_cast<std::size_t>(instance.size())) {
    throw Error(ErrorCode::kDimensionMismatch, kModule,
                "assignment has " + std::to_string(assignment.values.size()) +
                    " spins, instance has " + std::to_string(instance.size()));
  }
}

std::int64_t integer_sum(const SpinAssignment& assignment, std::span<const std::int64_t> w) {
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < w.size(); ++i) sum += w[i] * assignment.values[i];
  return sum;
}

double square_exact(std::int64_t sum) {
  const auto wide = static_cast<__int128>(sum) * sum;
  return static_cast<double>(wide);
}

// sum_i n_i y_i for a basis index, with qubit i at bit (N-1-i).
double real_sum(std::uint64_t index, std::span<const double> w) {
  const int n = static_cast<int>(w.size());
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    sum += (index & qubit_mask(n, i)) ? -w[static_cast<std::size_t>(i)]
                                      : w[static_cast<std::size_t>(i)];
  }
  return sum;
}

struct ChunkBest {
  double value = std::numeric_limits<double>::infinity();
  std::vector<std::uint64_t> indices;

  void offer(double v, std::uint64_t index) {
    if (v < value) {
      value = v;
      indices.clear();
    }
    if (v == value) indices.push_back(index);
  }
};

// Gray-code walk over k in [begin, end): index g(k) = k ^ (k >> 1) on the
// low N-1 bits, so each step flips one spin and updates the sum by 2 n.
ChunkBest scan_integral(std::span<const std::int64_t> w, std::uint64_t begin, std::uint64_t end) {
  const int n = static_cast<int>(w.size());
  ChunkBest best;
  std::uint64_t g = begin ^ (begin >> 1);
  std::int64_t sum = 0;
  for (int i = 0; i < n; ++i) {
    sum += (g & qubit_mask(n, i)) ? -w[static_cast<std::size_t>(i)] : w[static_cast<std::size_t>(i)];
  }
  for (std::uint64_t k = begin;;) {
    best.offer(square_exact(sum), g);
    if (++k == end) break;
    const int bit = std::countr_zero(k);
    const std::int64_t weight = w[static_cast<std::size_t>(n - 1 - bit)];
    g ^= std::uint64_t{1} << bit;
    sum += (g >> bit & 1U) ? -2 * weight : 2 * weight;
  }
  return best;
}

ChunkBest scan_real(std::span<const double> w, std::uint64_t begin, std::uint64_t end) {
  ChunkBest best;
  for (std::uint64_t k = begin; k < end; ++k) {
    const double s = real_sum(k, w);
    best.offer(s * s, k);
  }
  return best;
}

}  // namespace

SpinAssignment SpinAssignment::from_basis_index(int n, std::uint64_t index) {
  check_qubit_count(n, 63, kModule);
  if (n < 64 && index >> n) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "basis index beyond 2^N");
  }
  SpinAssignment out;
  out.values.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.values[static_cast<std::size_t>(i)] = (index & qubit_mask(n, i)) ? -1 : 1;
  return out;
}

std::uint64_t SpinAssignment::basis_index() const {
  const int n = static_cast<int>(values.size());
  std::uint64_t index = 0;
  for (int i = 0; i < n; ++i) {
    const int y = values[static_cast<std::size_t>(i)];
    if (y != 1 && y != -1) throw Error(ErrorCode::kInvalidArgument, kModule, "spins must be +1 or -1");
    if (y == -1) index |= qubit_mask(n, i);
  }
  return index;
}

SpinAssignment SpinAssignment::flipped() const {
  SpinAssignment out = *this;
  for (int& y : out.values) y = -y;
  return out;
}

double evaluate_ising(const SpinAssignment& assignment, const PartitionInstance& instance) {
  check_length(assignment, instance);
  for (int y : assignment.values) {
    if (y != 1 && y != -1) throw Error(ErrorCode::kInvalidArgument, kModule, "spins must be +1 or -1");
  }
  if (instance.is_integral()) {
    return square_exact(integer_sum(assignment, instance.integer_weights()));
  }
  double sum = 0.0;
  const auto w = instance.weights();
  for (std::size_t i = 0; i < w.size(); ++i) sum += w[i] * assignment.values[i];
  return sum * sum;
}

bool verify_zero_ground(const SpinAssignment& assignment, const PartitionInstance& instance) {
  const double value = evaluate_ising(assignment, instance);
  if (instance.is_integral()) return value == 0.0;
  const double total = instance.total();
  return value <= 1e-9 * total * total;
}

std::vector<std::uint64_t> PartitionSolution::optimal_indices() const {
  std::vector<std::uint64_t> out;
  out.reserve(optimal_assignments.size());
  for (const auto& a : optimal_assignments) out.push_back(a.basis_index());
  return out;
}

PartitionSolution brute_force(const PartitionInstance& instance, unsigned jobs) {
  const int n = instance.size();
  if (n > kBruteForceMaxQubits) {
    throw Error(ErrorCode::kCapExceeded, kModule,
                "brute force is capped at " + std::to_string(kBruteForceMaxQubits) + " spins, got " +
                    std::to_string(n));
  }
  const std::uint64_t half = std::uint64_t{1} << (n - 1);
  const std::size_t chunks = std::clamp<std::uint64_t>(half / 4096, 1, 64);
  std::vector<ChunkBest> partial(chunks);
  const bool integral = instance.is_integral();
  const auto integer_w = integral ? instance.integer_weights() : std::vector<std::int64_t>{};
  parallel_for(chunks, jobs, [&](std::size_t c) {
    const std::uint64_t begin = half * c / chunks;
    const std::uint64_t end = half * (c + 1) / chunks;
    partial[c] = integral ? scan_integral(integer_w, begin, end)
                          : scan_real(instance.weights(), begin, end);
  });

  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : partial) best = std::min(best, p.value);
  std::vector<std::uint64_t> indices;
  const std::uint64_t mask = (half << 1) - 1;
  for (const auto& p : partial) {
    if (p.value != best) continue;
    for (auto idx : p.indices) {
      indices.push_back(idx);
      indices.push_back(idx ^ mask);
    }
  }
  std::sort(indices.begin(), indices.end());

  PartitionSolution solution;
  solution.min_value = best;
  solution.is_perfect = best == 0.0;
  for (auto idx : indices) solution.optimal_assignments.push_back(SpinAssignment::from_basis_index(n, idx));
  return solution;
}

SpinAssignment measure_basis(const QuantumState& state, std::uint64_t seed) {
  std::vector<double> probs(state.dimension());
  for (std::size_t b = 0; b < probs.size(); ++b) probs[b] = std::norm(state[b]);
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::uint64_t> draw(probs.begin(), probs.end());
  return SpinAssignment::from_basis_index(state.num_qubits(), draw(rng));
}

}  // namespace qlab
