#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "qlab/eigensolver.hpp"
#include "qlab/hamiltonian.hpp"

namespace qlab {

/// Sector of the global spin flip X^{(x)N}. H(s) commutes with the flip, and
/// the uniform initial state lies in its +1 eigenspace.
enum class Sector { kFull, kFlipSymmetric };

std::string_view to_string(Sector sector);
/// Accepts "full", "flip_symmetric", "sym".
Sector parse_sector(std::string_view text);

/// Matrix of `op` in the basis (|b> + |~b>)/sqrt(2), b ranging over indices
/// with qubit 0 = 0. Throws InvalidArgument unless op commutes with the flip.
HermitianOperator restrict_to_flip_sector(const HermitianOperator& op);

/// Coordinates of a full-space vector in the flip-symmetric basis.
Amplitudes project_to_flip_sector(std::span<const Complex> full);
/// Full-space vector of sector coordinates.
Amplitudes lift_from_flip_sector(std::span<const Complex> sector);

/// k smallest eigenvalues of op restricted to `sector`, ascending.
std::vector<double> lowest_levels(const HermitianOperator& op, std::size_t k, Sector sector,
                                  const EigenOptions& options = {});

/// Orthonormal basis of the lowest eigenspace (eigenvalues within
/// `degeneracy_tol * max(1, |E0|)` of E0), in the coordinates of `op`.
EigenPairs ground_space(const HermitianOperator& op, const EigenOptions& options,
                        double degeneracy_tol = 1e-8);

enum class GapRefinement { kNone, kHalving, kBrent };

std::string_view to_string(GapRefinement refine);
GapRefinement parse_refinement(std::string_view text);

struct GapOptions {
  std::size_t grid_size = 64;
  Sector sector = Sector::kFlipSymmetric;
  GapRefinement refinement = GapRefinement::kBrent;
  EigenOptions eigen;
};

struct GapProfile {
  std::vector<double> s_grid;
  std::vector<double> e0;
  std::vector<double> e1;
  Sector sector = Sector::kFlipSymmetric;
  double min_gap = 0.0;
  double argmin_s = 0.0;
  int num_qubits = 0;
};

/// E0(s), E1(s) of (1-s) H_trans + s H_Ising on a uniform grid including both
/// endpoints, refined around the coarse minimum. Every evaluated point is kept
/// in the profile, sorted by s.
GapProfile gap_profile(const PartitionInstance& instance, const GapOptions& options = {});

struct GapScalingFit {
  /// (N, median minimum gap).
  std::vector<std::pair<int, double>> samples;
  /// min_gap ~ A exp(-c N).
  double c = 0.0;
  double log_amplitude = 0.0;
  double log_residual = 0.0;
  /// min_gap ~ A N^{-p}.
  double power_exponent = 0.0;
  double power_log_amplitude = 0.0;
  double power_residual = 0.0;
};

/// Input: per N, the minimum gaps of the instances. Requires >= 4 distinct N,
/// >= 5 instances per N and strictly positive gaps.
GapScalingFit fit_gap_scaling(const std::vector<std::pair<int, std::vector<double>>>& profiles);

}  // namespace qlab
