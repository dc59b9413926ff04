#pragma once

// Straightforward dense reference computations. They share no code with the
// library solvers beyond Eigen itself, and are only meant for small sizes.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat pauli(char c) {
  Mat m(2, 2);
  switch (c) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cd(0, -1), cd(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m.setIdentity();
  }
  return m;
}

// Kronecker product of single-qubit factors, first letter on site 1.
inline Mat pauli_string(const std::string& s) {
  Mat m = Mat::Identity(1, 1);
  for (char c : s) m = Eigen::kroneckerProduct(m, pauli(c)).eval();
  return m;
}

// Letter `c` on `site` (1-based) of an L-qubit chain.
inline Mat on_site(char c, int site, int L) {
  std::string s(L, 'I');
  s[site - 1] = c;
  return pauli_string(s);
}

inline Vec vec_rowmajor(const Mat& X) {
  Vec v(X.size());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j) v(i * X.cols() + j) = X(i, j);
  return v;
}

inline Mat ad(const Mat& K) {
  const Eigen::Index n = K.rows();
  const Mat I = Mat::Identity(n, n);
  return Eigen::kroneckerProduct(K, I).eval() - Eigen::kroneckerProduct(I, Mat(K.transpose())).eval();
}

inline int rank(const Mat& A, double rel = 1e-9) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(A);
  const auto s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel * s(0)) ++r;
  return r;
}

// Orthonormal nullspace of a hermitian PSD matrix.
inline Mat psd_null(const Mat& M, double rel = 1e-9) {
  Eigen::SelfAdjointEigenSolver<Mat> es(M);
  const double top = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) < rel * top) keep.push_back(i);
  Mat out(M.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) out.col(k) = es.eigenvectors().col(keep[k]);
  return out;
}

// Vectorized basis of {X : [X, g] = 0 for all g}.
inline Mat commutant(const std::vector<Mat>& gens) {
  const Eigen::Index n = gens.front().rows();
  Mat M = Mat::Zero(n * n, n * n);
  for (const auto& g : gens) {
    const Mat a = ad(g);
    M += a.adjoint() * a;
  }
  return psd_null(M);
}

inline Mat unvec(const Vec& v, Eigen::Index n) {
  Mat X(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) X(i, j) = v(i * n + j);
  return X;
}

inline std::vector<Mat> columns_as_ops(const Mat& V, Eigen::Index n) {
  std::vector<Mat> out;
  for (Eigen::Index k = 0; k < V.cols(); ++k) out.push_back(unvec(V.col(k), n));
  return out;
}

// Plain Gram-Schmidt closure under X -> [g, X] (Lie) or X -> g X (associative).
inline int closure_dim(const std::vector<Mat>& gens, bool lie, bool with_identity) {
  const Eigen::Index n = gens.front().rows();
  std::vector<Vec> basis;
  std::vector<Mat> ops;
  auto add = [&](const Mat& X) {
    Vec v = vec_rowmajor(X);
    const double nrm = v.norm();
    if (nrm < 1e-12) return false;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) v -= b * b.dot(v);
    if (v.norm() < 1e-9 * nrm) return false;
    v.normalize();
    basis.push_back(v);
    ops.push_back(unvec(v, n));
    return true;
  };
  if (with_identity) add(Mat::Identity(n, n));
  for (const auto& g : gens) add(lie ? Mat(cd(0, 1) * g) : g);
  for (std::size_t k = 0; k < ops.size(); ++k)
    for (const auto& g : gens) {
      const Mat X = ops[k];
      add(lie ? Mat(g * X - X * g) : Mat(g * X));
      if (!lie) add(Mat(X * g));
    }
  return static_cast<int>(basis.size());
}

// dim of the algebra generated by {gens, 1}, as the commutant of the commutant.
inline int double_commutant_dim(const std::vector<Mat>& gens) {
  const Eigen::Index n = gens.front().rows();
  std::vector<Mat> c = columns_as_ops(commutant(gens), n);
  return static_cast<int>(commutant(c).cols());
}

// Superoperators commuting with every L_h, dense on dim^4 (tiny chains only).
inline int super_commutant_dim(const std::vector<Mat>& gens) {
  std::vector<Mat> sup;
  for (const auto& g : gens) sup.push_back(ad(g));
  return static_cast<int>(commutant(sup).cols());
}

inline Mat random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Mat A(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = cd(nd(rng), nd(rng));
  return 0.5 * (A + A.adjoint());
}

inline double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Haar-average purity in the form with 2^{-l} corrections.
inline double page_purity_uni(int L, int l) {
  const double a = std::pow(2.0, l), b = std::pow(2.0, L - l), N = std::pow(2.0, L);
  return ((a - 1 / a) + (b - 1 / b)) / (N - 1 / N);
}

}  // namespace oracle
