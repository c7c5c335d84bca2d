#pragma once

// Lowest eigenpairs of sparse Hermitian operators: a dense route (Eigen's
// self-adjoint solver) and a Davidson iteration with a diagonal
// preconditioner for spaces too large to diagonalize densely.

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qlab/qubit_algebra.hpp"

namespace qlab {

enum class EigenMethod { kAuto, kDense, kIterative };

struct EigenOptions {
  EigenMethod method = EigenMethod::kAuto;
  /// kAuto diagonalizes densely up to this dimension.
  std::size_t dense_max_dimension = 1024;
  /// Residual bound ||H x - theta x|| <= tolerance * max(1, |theta|).
  double tolerance = 1e-11;
  std::size_t max_iterations = 4000;
  std::size_t max_subspace = 64;
  std::uint64_t seed = 0x5eed;
};

struct EigenPairs {
  std::vector<double> values;
  /// Empty unless vectors were requested.
  std::vector<Amplitudes> vectors;
};

Eigen::MatrixXcd to_dense(const HermitianOperator& op);

EigenPairs dense_lowest(const HermitianOperator& op, std::size_t k, bool want_vectors);

/// Throws ConvergenceFailure when the residual bound is not met within
/// max_iterations.
EigenPairs davidson_lowest(const HermitianOperator& op, std::size_t k, const EigenOptions& options,
                           bool want_vectors);

EigenPairs lowest_eigenpairs(const HermitianOperator& op, std::size_t k,
                             const EigenOptions& options, bool want_vectors);

}  // namespace qlab
