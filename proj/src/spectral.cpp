#include "qlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "qlab/error.hpp"
#include "qlab/numerics.hpp"

namespace qlab {
namespace {

constexpr std::string_view kModule = "spectral_analyzer";

std::string format_s(double s) {
  std::ostringstream out;
  out.precision(17);
  out << s;
  return out.str();
}

}  // namespace

std::string_view to_string(Sector sector) {
  return sector == Sector::kFull ? "full" : "flip_symmetric";
}

Sector parse_sector(std::string_view text) {
  if (text == "full") return Sector::kFull;
  if (text == "flip_symmetric" || text == "sym") return Sector::kFlipSymmetric;
  throw Error(ErrorCode::kParseError, kModule, "unknown sector '" + std::string(text) + "'");
}

std::string_view to_string(GapRefinement refine) {
  switch (refine) {
    case GapRefinement::kNone: return "none";
    case GapRefinement::kHalving: return "halving";
    case GapRefinement::kBrent: return "brent";
  }
  return "brent";
}

GapRefinement parse_refinement(std::string_view text) {
  if (text == "none") return GapRefinement::kNone;
  if (text == "halving") return GapRefinement::kHalving;
  if (text == "brent") return GapRefinement::kBrent;
  throw Error(ErrorCode::kParseError, kModule, "unknown refinement '" + std::string(text) + "'");
}

HermitianOperator restrict_to_flip_sector(const HermitianOperator& op) {
  const std::uint64_t dim = op.dimension();
  if (dim < 2) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "flip sector needs at least one qubit");
  }
  const std::uint64_t mask = dim - 1;
  const std::uint64_t half = dim / 2;
  std::vector<MatrixEntry> entries;
  entries.reserve(op.nonzeros() / 2 + 1);
  for (const auto& e : op.entries()) {
    if (op.at(e.row ^ mask, e.col ^ mask) != e.value) {
      throw Error(ErrorCode::kInvalidArgument, kModule,
                  "operator does not commute with the global spin flip");
    }
    if (e.row >= half) continue;
    const std::uint64_t col = e.col < half ? e.col : e.col ^ mask;
    entries.push_back({e.row, col, e.value});
  }
  return HermitianOperator::from_entries(half, std::move(entries));
}

Amplitudes project_to_flip_sector(std::span<const Complex> full) {
  const std::size_t dim = full.size();
  const std::size_t half = dim / 2;
  const double r = 1.0 / std::sqrt(2.0);
  Amplitudes out(half);
  for (std::size_t b = 0; b < half; ++b) out[b] = r * (full[b] + full[b ^ (dim - 1)]);
  return out;
}

Amplitudes lift_from_flip_sector(std::span<const Complex> sector) {
  const std::size_t half = sector.size();
  const std::size_t dim = 2 * half;
  const double r = 1.0 / std::sqrt(2.0);
  Amplitudes out(dim);
  for (std::size_t b = 0; b < half; ++b) {
    out[b] = r * sector[b];
    out[b ^ (dim - 1)] = r * sector[b];
  }
  return out;
}

std::vector<double> lowest_levels(const HermitianOperator& op, std::size_t k, Sector sector,
                                  const EigenOptions& options) {
  if (sector == Sector::kFull) return lowest_eigenpairs(op, k, options, false).values;
  return lowest_eigenpairs(restrict_to_flip_sector(op), k, options, false).values;
}

EigenPairs ground_space(const HermitianOperator& op, const EigenOptions& options,
                        double degeneracy_tol) {
  const std::size_t dim = op.dimension();
  if (op.is_diagonal()) {
    const auto diag = op.diagonal_values();
    const double e0 = *std::min_element(diag.begin(), diag.end());
    const double cut = e0 + degeneracy_tol * std::max(1.0, std::abs(e0));
    EigenPairs out;
    for (std::size_t b = 0; b < dim; ++b) {
      if (diag[b] <= cut) {
        out.values.push_back(diag[b]);
        Amplitudes v(dim);
        v[b] = 1.0;
        out.vectors.push_back(std::move(v));
      }
    }
    return out;
  }
  const bool dense = options.method == EigenMethod::kDense ||
                     (options.method == EigenMethod::kAuto && dim <= options.dense_max_dimension);
  for (std::size_t k = dense ? dim : std::min<std::size_t>(2, dim);; k = std::min(dim, 2 * k)) {
    EigenPairs pairs = lowest_eigenpairs(op, k, options, true);
    const double e0 = pairs.values.front();
    const double cut = e0 + degeneracy_tol * std::max(1.0, std::abs(e0));
    std::size_t count = 0;
    while (count < pairs.values.size() && pairs.values[count] <= cut) ++count;
    if (count < pairs.values.size() || k == dim) {
      pairs.values.resize(count);
      pairs.vectors.resize(count);
      return pairs;
    }
  }
}

GapProfile gap_profile(const PartitionInstance& instance, const GapOptions& options) {
  if (options.grid_size < 3) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "gap profile needs grid_size >= 3");
  }
  HermitianOperator h_trans = build_transverse(instance.size());
  HermitianOperator h_ising = build_ising(instance);
  if (options.sector == Sector::kFlipSymmetric) {
    h_trans = restrict_to_flip_sector(h_trans);
    h_ising = restrict_to_flip_sector(h_ising);
  }

  std::map<double, std::pair<double, double>> levels;
  auto evaluate = [&](double s) {
    if (auto it = levels.find(s); it != levels.end()) return it->second.second - it->second.first;
    std::vector<double> e;
    try {
      e = lowest_eigenpairs(interpolate(h_trans, h_ising, s), 2, options.eigen, false).values;
    } catch (const Error& err) {
      throw Error(err.code(), kModule, "at s = " + format_s(s) + ": " + err.what());
    }
    levels.emplace(s, std::pair{e[0], e[1]});
    return e[1] - e[0];
  };

  const std::size_t grid = options.grid_size;
  const double h = 1.0 / static_cast<double>(grid - 1);
  std::vector<double> coarse(grid);
  for (std::size_t k = 0; k < grid; ++k) {
    coarse[k] = k + 1 == grid ? 1.0 : static_cast<double>(k) * h;
    evaluate(coarse[k]);
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < grid; ++k) {
    if (evaluate(coarse[k]) < evaluate(coarse[best])) best = k;
  }
  const double s_best = coarse[best];

  switch (options.refinement) {
    case GapRefinement::kNone: break;
    case GapRefinement::kHalving: {
      double side = 0.0;
      double side_gap = 0.0;
      bool have_side = false;
      for (double cand : {s_best - 0.5 * h, s_best + 0.5 * h}) {
        if (cand < 0.0 || cand > 1.0) continue;
        const double g = evaluate(cand);
        if (!have_side || g < side_gap) {
          side = cand;
          side_gap = g;
          have_side = true;
        }
      }
      if (have_side) evaluate(0.5 * (s_best + side));
      break;
    }
    case GapRefinement::kBrent: {
      const double lo = best == 0 ? 0.0 : coarse[best - 1];
      const double hi = best + 1 == grid ? 1.0 : coarse[best + 1];
      std::uintmax_t max_iter = 200;
      boost::math::tools::brent_find_minima(evaluate, lo, hi, 50, max_iter);
      break;
    }
  }

  GapProfile profile;
  profile.sector = options.sector;
  profile.num_qubits = instance.size();
  for (const auto& [s, e] : levels) {
    profile.s_grid.push_back(s);
    profile.e0.push_back(e.first);
    profile.e1.push_back(e.second);
  }
  std::size_t arg = 0;
  for (std::size_t k = 1; k < profile.s_grid.size(); ++k) {
    if (profile.e1[k] - profile.e0[k] < profile.e1[arg] - profile.e0[arg]) arg = k;
  }
  profile.min_gap = profile.e1[arg] - profile.e0[arg];
  profile.argmin_s = profile.s_grid[arg];
  return profile;
}

GapScalingFit fit_gap_scaling(const std::vector<std::pair<int, std::vector<double>>>& profiles) {
  std::map<int, std::vector<double>> by_n;
  for (const auto& [n, gaps] : profiles) {
    auto& bucket = by_n[n];
    bucket.insert(bucket.end(), gaps.begin(), gaps.end());
  }
  if (by_n.size() < 4) {
    throw Error(ErrorCode::kInsufficientData, kModule,
                "gap scaling fit needs >= 4 distinct N, got " + std::to_string(by_n.size()));
  }
  GapScalingFit fit;
  std::vector<double> ns;
  std::vector<double> log_ns;
  std::vector<double> log_gaps;
  for (const auto& [n, gaps] : by_n) {
    if (gaps.size() < 5) {
      throw Error(ErrorCode::kInsufficientData, kModule,
                  "N = " + std::to_string(n) + " has fewer than 5 instances");
    }
    for (double g : gaps) {
      if (!(g > 0.0)) {
        throw Error(ErrorCode::kInvalidArgument, kModule,
                    "non-positive minimum gap at N = " + std::to_string(n) +
                        " (degenerate sector?)");
      }
    }
    const double med = median(gaps);
    fit.samples.emplace_back(n, med);
    ns.push_back(n);
    log_ns.push_back(std::log(static_cast<double>(n)));
    log_gaps.push_back(std::log(med));
  }
  const LinearFit exp_fit = fit_line(ns, log_gaps);
  fit.c = -exp_fit.slope;
  fit.log_amplitude = exp_fit.intercept;
  fit.log_residual = exp_fit.rms_residual;
  const LinearFit pow_fit = fit_line(log_ns, log_gaps);
  fit.power_exponent = -pow_fit.slope;
  fit.power_log_amplitude = pow_fit.intercept;
  fit.power_residual = pow_fit.rms_residual;
  return fit;
}

}  // namespace qlab
