#pragma once
// Dense reference constructions built from 2x2 matrices and Kronecker
// products. They share no code with the sparse library paths they check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qlab/qubit_algebra.hpp"

namespace oracle {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using C = std::complex<double>;

inline Mat pauli2(char p) {
  Mat m(2, 2);
  switch (p) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, C(0, -1), C(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m << 1, 0, 0, 1; break;
  }
  return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Qubit 0 is the leftmost (outermost) Kronecker factor.
inline Mat pauli_string(const std::string& letters) {
  Mat out = Mat::Identity(1, 1);
  for (char p : letters) out = kron(out, pauli2(p));
  return out;
}

inline std::string single(int n, int site, char p) {
  std::string s(static_cast<std::size_t>(n), 'I');
  s[static_cast<std::size_t>(site)] = p;
  return s;
}

inline Mat transverse(int n) {
  const auto d = Eigen::Index{1} << n;
  Mat h = Mat::Zero(d, d);
  for (int i = 0; i < n; ++i) h -= pauli_string(single(n, i, 'X'));
  return h;
}

/// (sum_i n_i Z_i)^2 as a matrix square.
inline Mat ising(const std::vector<double>& w) {
  const int n = static_cast<int>(w.size());
  const auto d = Eigen::Index{1} << n;
  Mat s = Mat::Zero(d, d);
  for (int i = 0; i < n; ++i) s += w[static_cast<std::size_t>(i)] * pauli_string(single(n, i, 'Z'));
  return s * s;
}

inline Mat dense(const qlab::HermitianOperator& op) {
  const auto d = static_cast<Eigen::Index>(op.dimension());
  Mat m = Mat::Zero(d, d);
  for (const auto& e : op.entries()) m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) = e.value;
  return m;
}

/// exp(-i H t) by eigendecomposition.
inline Mat expm(const Mat& h, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Vec phases(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k) phases(k) = std::polar(1.0, -es.eigenvalues()(k) * t);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

inline Vec to_vec(std::span<const C> a) {
  Vec v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i];
  return v;
}

inline qlab::Amplitudes to_amps(const Vec& v) { return qlab::Amplitudes(v.data(), v.data() + v.size()); }

inline Vec uniform(int n) {
  const auto d = Eigen::Index{1} << n;
  return Vec::Constant(d, C(1.0 / std::sqrt(static_cast<double>(d)), 0.0));
}

/// Midpoint piecewise-constant evolution of the uniform state.
inline Vec midpoint_evolution(const std::vector<double>& w, double total, std::size_t steps) {
  const int n = static_cast<int>(w.size());
  const Mat ht = transverse(n);
  const Mat hi = ising(w);
  Vec psi = uniform(n);
  const double dt = total / static_cast<double>(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const double s = (static_cast<double>(k) + 0.5) / static_cast<double>(steps);
    psi = expm((1.0 - s) * ht + s * hi, dt) * psi;
  }
  return psi;
}

inline Vec random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const auto d = Eigen::Index{1} << n;
  Vec v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = C(g(rng), g(rng));
  return v / v.norm();
}

inline Mat random_hermitian(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat a(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = C(g(rng), g(rng));
  }
  return 0.5 * (a + a.adjoint());
}

inline qlab::HermitianOperator to_operator(const Mat& m) {
  std::vector<qlab::MatrixEntry> entries;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      entries.push_back({static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j), m(i, j)});
    }
  }
  return qlab::HermitianOperator::from_entries(static_cast<std::size_t>(m.rows()), std::move(entries));
}

/// Spins y_i of basis index b (qubit i at bit N-1-i; bit 0 -> +1).
inline std::vector<int> spins(int n, std::uint64_t b) {
  std::vector<int> y(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = ((b >> (n - 1 - i)) & 1U) ? -1 : 1;
  return y;
}

}  // namespace oracle
