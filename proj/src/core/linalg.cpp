#include "clab/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace clab {

Vec vec_rowmajor(const Mat& X) {
  Mat Xt = X.transpose();
  return Eigen::Map<const Vec>(Xt.data(), Xt.size());
}

Mat unvec_rowmajor(const Vec& v, Eigen::Index n) {
  Mat Xt = Eigen::Map<const Mat>(v.data(), n, n);
  return Xt.transpose();
}

cd fro_inner(const Mat& A, const Mat& B) { return (A.conjugate().cwiseProduct(B)).sum(); }

cd fro_inner(const SpMat& A, const SpMat& B) {
  return SpMat(A.conjugate().cwiseProduct(B)).sum();
}

// JacobiSVD throughout: BDCSVD in Eigen 3.4.0 can crash on exactly rank-deficient input.
int numerical_rank(const Mat& A, double rel) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(A);
  const RVec& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel * s(0)) ++r;
  return r;
}

Mat orthonormal_columns(const Mat& A, double rel) {
  if (A.cols() == 0) return Mat(A.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU);
  const RVec& s = svd.singularValues();
  int r = 0;
  if (s.size() > 0 && s(0) > 0.0)
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > rel * s(0)) ++r;
  return svd.matrixU().leftCols(r);
}

Mat psd_nullspace(const Mat& H, double rel, double abs_floor) {
  const Eigen::Index n = H.rows();
  if (n == 0) return Mat(0, 0);
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  const RVec& ev = es.eigenvalues();
  double top = std::max(std::abs(ev(n - 1)), std::abs(ev(0)));
  double cut = std::max(rel * top, abs_floor);
  if (top == 0.0) cut = 0.5;  // the zero matrix: everything is null
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < n; ++i)
    if (ev(i) <= cut) keep.push_back(i);
  Mat out(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) out.col(c) = es.eigenvectors().col(keep[c]);
  return out;
}

Mat subspace_intersection(const Mat& A, const Mat& B, double angle) {
  if (A.cols() == 0 || B.cols() == 0) return Mat(A.rows(), 0);
  Mat C = A.adjoint() * B;
  Eigen::JacobiSVD<Mat> svd(C, Eigen::ComputeFullU);
  const RVec& s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) >= 1.0 - angle) ++r;
  Mat out = A * svd.matrixU().leftCols(r);
  return orthonormal_columns(out, 1e-6);
}

bool same_span(const Mat& A, const Mat& B, double angle) {
  if (A.cols() != B.cols()) return false;
  if (A.cols() == 0) return true;
  return subspace_intersection(A, B, angle).cols() == A.cols();
}

double span_residual(const Mat& B, const Mat& X) {
  if (X.cols() == 0) return 0.0;
  Mat R = X;
  if (B.cols() > 0) R -= B * (B.adjoint() * X);
  double worst = 0.0;
  for (Eigen::Index c = 0; c < R.cols(); ++c) worst = std::max(worst, R.col(c).norm());
  return worst;
}

std::vector<std::vector<int>> cluster_sorted(const RVec& evals, double gap) {
  std::vector<std::vector<int>> groups;
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    if (groups.empty() || evals(i) - evals(groups.back().back()) > gap)
      groups.push_back({static_cast<int>(i)});
    else
      groups.back().push_back(static_cast<int>(i));
  }
  return groups;
}

SpanBuilder::SpanBuilder(Eigen::Index n, Eigen::Index reserve) : n_(n), Q_(n, std::max<Eigen::Index>(reserve, 1)) {}

bool SpanBuilder::add(const Vec& v, double rel, double abs_floor, double* residual) {
  const double n0 = v.norm();
  if (residual) *residual = n0;
  if (n0 <= abs_floor || n0 == 0.0) return false;
  Vec r = v;
  if (k_ > 0) {
    auto Q = Q_.leftCols(k_);
    r.noalias() -= Q * (Q.adjoint() * r);
    r.noalias() -= Q * (Q.adjoint() * r);
  }
  const double rn = r.norm();
  if (residual) *residual = rn / n0;
  if (rn <= rel * n0) return false;
  if (k_ == Q_.cols()) Q_.conservativeResize(Eigen::NoChange, 2 * Q_.cols());
  Q_.col(k_++) = r / rn;
  return true;
}

std::vector<char> SpanBuilder::add_batch(const Mat& C, double rel) {
  std::vector<char> out(C.cols(), 0);
  if (C.cols() == 0) return out;
  const RVec n0 = C.colwise().norm().transpose();
  Mat R = C;
  const Eigen::Index k0 = k_;
  if (k0 > 0) {
    auto Q = Q_.leftCols(k0);
    Mat T = Q.adjoint() * R;
    R.noalias() -= Q * T;
    T.noalias() = Q.adjoint() * R;
    R.noalias() -= Q * T;
  }
  for (Eigen::Index j = 0; j < C.cols(); ++j) {
    if (n0(j) == 0.0) continue;
    Vec r = R.col(j);
    if (k_ > k0) {
      auto Q = Q_.middleCols(k0, k_ - k0);
      r.noalias() -= Q * (Q.adjoint() * r);
      r.noalias() -= Q * (Q.adjoint() * r);
    }
    const double rn = r.norm();
    if (rn <= rel * n0(j)) continue;
    if (k_ == Q_.cols()) Q_.conservativeResize(Eigen::NoChange, std::max<Eigen::Index>(2 * Q_.cols(), k_ + C.cols()));
    Q_.col(k_++) = r / rn;
    out[j] = 1;
  }
  return out;
}

int Blocks::total() const {
  int t = 0;
  for (int s : size) t += s;
  return t;
}

int Blocks::block_of(int index) const {
  auto it = std::upper_bound(start.begin(), start.end(), index);
  return static_cast<int>(std::distance(start.begin(), it)) - 1;
}

Mat MatrixAlgebra::original(std::size_t k) const {
  Mat E = Mat(elements.at(k));
  if (V.size() == 0) return E;
  return V * E * V.adjoint();
}

Mat MatrixAlgebra::frame_dense(const Mat& X) const {
  if (V.size() == 0) return X;
  return V.adjoint() * X * V;
}

SpMat MatrixAlgebra::to_frame(const Mat& X) const {
  Mat F = frame_dense(X);
  std::vector<Eigen::Triplet<cd>> trip;
  for (int b = 0; b < blocks.count(); ++b) {
    const int s = blocks.start[b], g = blocks.size[b];
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) {
        cd v = F(s + i, s + j);
        if (v != cd(0)) trip.emplace_back(s + i, s + j, v);
      }
  }
  SpMat out(N, N);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

namespace {

Blocks single_block(Eigen::Index N) {
  Blocks b;
  b.start = {0};
  b.size = {static_cast<int>(N)};
  return b;
}

SpMat sparsify(const Mat& X, double drop = 0.0) {
  std::vector<Eigen::Triplet<cd>> trip;
  for (Eigen::Index j = 0; j < X.cols(); ++j)
    for (Eigen::Index i = 0; i < X.rows(); ++i)
      if (std::abs(X(i, j)) > drop) trip.emplace_back(i, j, X(i, j));
  SpMat out(X.rows(), X.cols());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

std::vector<Mat> normalized_nonzero(const std::vector<Mat>& gens) {
  std::vector<Mat> out;
  for (const auto& g : gens) {
    double n = g.norm();
    if (n > 1e-14) out.push_back(g / n);
  }
  return out;
}

Mat random_combination(const std::vector<Mat>& gens, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Mat H = Mat::Zero(gens.front().rows(), gens.front().cols());
  for (const auto& g : gens) H += nd(rng) * g;
  return H;
}

}  // namespace

MatrixAlgebra commutant_of_dense(const std::vector<Mat>& gens) {
  if (gens.empty()) throw Error("commutant_of_dense: empty generator list");
  const Eigen::Index N = gens.front().rows();
  const Eigen::Index N2 = N * N;
  Mat I = Mat::Identity(N, N);
  Mat P2 = Mat::Zero(N2, N2);
  for (const auto& g : normalized_nonzero(gens)) {
    Mat L = Eigen::kroneckerProduct(g, I).eval();
    L -= Eigen::kroneckerProduct(I, Mat(g.transpose())).eval();
    P2.noalias() += L * L;
  }
  // Generators are unit norm; a scale-free cutoff would misread rounding noise
  // from a multiple of the identity as a nonzero spectrum.
  Mat null = psd_nullspace(P2, tol::null, 1e-18);
  MatrixAlgebra out;
  out.N = N;
  out.blocks = single_block(N);
  for (Eigen::Index c = 0; c < null.cols(); ++c) out.elements.push_back(sparsify(unvec_rowmajor(null.col(c), N)));
  return out;
}

MatrixAlgebra commutant_of(const std::vector<Mat>& gens_in, const SolveOptions& opt) {
  if (gens_in.empty()) throw Error("commutant_of: empty generator list");
  const Eigen::Index N = gens_in.front().rows();
  for (const auto& g : gens_in)
    if (g.rows() != N || g.cols() != N) throw Error("commutant_of: generator shape mismatch");

  const bool dense = opt.method == SolveOptions::Method::Dense ||
                     (opt.method == SolveOptions::Method::Auto && N * N <= opt.dense_limit);
  if (dense) return commutant_of_dense(gens_in);

  std::vector<Mat> gens = normalized_nonzero(gens_in);
  MatrixAlgebra out;
  out.N = N;
  if (gens.empty()) {
    // Everything commutes with zero.
    out.blocks = single_block(N);
    for (Eigen::Index i = 0; i < N; ++i)
      for (Eigen::Index j = 0; j < N; ++j) {
        SpMat E(N, N);
        E.insert(i, j) = 1.0;
        out.elements.push_back(E);
      }
    return out;
  }

  // A generic element of the generated algebra: its eigenspaces bound the commutant.
  std::mt19937_64 rng(mix_seed(opt.seed, 17));
  Mat H1 = random_combination(gens, rng);
  Mat H2 = random_combination(gens, rng);
  Mat H3 = random_combination(gens, rng);
  Mat K = H1 + 0.5 * (H2 * H3 + H3 * H2);
  K = 0.5 * (K + K.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(K);
  const RVec& ev = es.eigenvalues();
  const double radius = std::max(std::abs(ev(0)), std::abs(ev(N - 1)));
  auto groups = cluster_sorted(ev, tol::cluster * std::max(radius, 1e-300));
  out.V = es.eigenvectors();
  for (const auto& grp : groups) {
    out.blocks.start.push_back(grp.front());
    out.blocks.size.push_back(static_cast<int>(grp.size()));
  }

  std::vector<int> pI, pJ;
  for (int b = 0; b < out.blocks.count(); ++b) {
    const int s = out.blocks.start[b], g = out.blocks.size[b];
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) {
        pI.push_back(s + i);
        pJ.push_back(s + j);
      }
  }
  const Eigen::Index n = static_cast<Eigen::Index>(pI.size());
  if (n > opt.max_unknowns)
    throw SizeLimitError("commutant_of: " + std::to_string(n) + " unknowns exceed the limit of " +
                         std::to_string(opt.max_unknowns));

  Mat M = Mat::Zero(n, n);
  for (const auto& g : gens) {
    Mat G = out.V.adjoint() * g * out.V;
    Mat G2 = G * G;
    for (Eigen::Index q = 0; q < n; ++q) {
      const int k = pI[q], l = pJ[q];
      for (Eigen::Index p = 0; p < n; ++p) {
        const int i = pI[p], j = pJ[p];
        cd v = -2.0 * G(i, k) * G(l, j);
        if (j == l) v += G2(i, k);
        if (i == k) v += G2(l, j);
        M(p, q) += v;
      }
    }
  }
  Mat null = psd_nullspace(M, tol::null, 1e-18);
  for (Eigen::Index c = 0; c < null.cols(); ++c) {
    std::vector<Eigen::Triplet<cd>> trip;
    for (Eigen::Index p = 0; p < n; ++p)
      if (null(p, c) != cd(0)) trip.emplace_back(pI[p], pJ[p], null(p, c));
    SpMat E(N, N);
    E.setFromTriplets(trip.begin(), trip.end());
    out.elements.push_back(E);
  }
  return out;
}

SpMat random_hermitian_element(const MatrixAlgebra& alg, std::uint64_t seed) {
  std::mt19937_64 rng(mix_seed(seed, 29));
  std::normal_distribution<double> nd(0.0, 1.0);
  SpMat X(alg.N, alg.N);
  for (const auto& E : alg.elements) X += cd(nd(rng), nd(rng)) * E;
  SpMat H = 0.5 * (X + SpMat(X.adjoint()));
  double n = std::sqrt(std::abs(fro_inner(H, H)));
  if (n > 0) H /= n;
  return H;
}

MatrixAlgebra algebra_center(const MatrixAlgebra& alg, std::uint64_t seed) {
  MatrixAlgebra out;
  out.N = alg.N;
  out.V = alg.V;
  out.blocks = alg.blocks;
  const std::size_t s = alg.dim();
  if (s == 0) return out;
  std::vector<SpMat> ys = {random_hermitian_element(alg, mix_seed(seed, 1)),
                           random_hermitian_element(alg, mix_seed(seed, 2)),
                           random_hermitian_element(alg, mix_seed(seed, 3))};
  Mat G = Mat::Zero(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s));
  for (const auto& y : ys) {
    std::vector<SpMat> C;
    C.reserve(s);
    for (const auto& E : alg.elements) C.push_back(SpMat(E * y - y * E));
    for (std::size_t k = 0; k < s; ++k)
      for (std::size_t l = k; l < s; ++l) {
        cd v = fro_inner(C[k], C[l]);
        G(k, l) += v;
        if (l != k) G(l, k) += std::conj(v);
      }
  }
  // Unit-norm elements: squared commutator norms below 1e-20 are rounding noise.
  Mat null = psd_nullspace(G, tol::null, 1e-20);
  for (Eigen::Index c = 0; c < null.cols(); ++c) {
    SpMat Z(alg.N, alg.N);
    for (std::size_t k = 0; k < s; ++k) Z += null(static_cast<Eigen::Index>(k), c) * alg.elements[k];
    Z.prune(cd(0), 1e-15);
    out.elements.push_back(Z);
  }
  return out;
}

namespace {

struct Piece {
  int block;
  Mat W;  // orthonormal columns inside the block
};
using Pieces = std::vector<Piece>;

Mat dense_block(const SpMat& X, int s, int g) {
  Mat out = Mat::Zero(g, g);
  for (int c = s; c < s + g; ++c)
    for (SpMat::InnerIterator it(X, c); it; ++it)
      if (it.row() >= s && it.row() < s + g) out(it.row() - s, c - s) = it.value();
  return out;
}

std::vector<Pieces> split_by(const std::vector<Pieces>& projs, const SpMat& z, const Blocks& blocks, double gap) {
  std::vector<Pieces> result;
  for (const auto& P : projs) {
    struct Item {
      double lam;
      int block;
      Vec v;
    };
    std::vector<Item> items;
    for (const auto& pc : P) {
      Mat zb = dense_block(z, blocks.start[pc.block], blocks.size[pc.block]);
      Mat c = pc.W.adjoint() * zb * pc.W;
      c = 0.5 * (c + c.adjoint()).eval();
      Eigen::SelfAdjointEigenSolver<Mat> es(c);
      for (Eigen::Index i = 0; i < c.rows(); ++i)
        items.push_back({es.eigenvalues()(i), pc.block, pc.W * es.eigenvectors().col(i)});
    }
    std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.lam < b.lam; });
    std::size_t i = 0;
    while (i < items.size()) {
      std::size_t j = i + 1;
      while (j < items.size() && items[j].lam - items[j - 1].lam <= gap) ++j;
      Pieces np;
      for (std::size_t t = i; t < j; ++t) {
        auto it = std::find_if(np.begin(), np.end(), [&](const Piece& p) { return p.block == items[t].block; });
        if (it == np.end()) {
          np.push_back({items[t].block, Mat(items[t].v.size(), 0)});
          it = np.end() - 1;
        }
        it->W.conservativeResize(Eigen::NoChange, it->W.cols() + 1);
        it->W.col(it->W.cols() - 1) = items[t].v;
      }
      std::sort(np.begin(), np.end(), [](const Piece& a, const Piece& b) { return a.block < b.block; });
      result.push_back(std::move(np));
      i = j;
    }
  }
  return result;
}

}  // namespace

std::vector<SpMat> central_projectors(const MatrixAlgebra& center, std::uint64_t seed, int expected,
                                      int max_rounds) {
  std::vector<Pieces> projs(1);
  for (int b = 0; b < center.blocks.count(); ++b)
    projs[0].push_back({b, Mat::Identity(center.blocks.size[b], center.blocks.size[b])});
  for (int round = 0; round < max_rounds && static_cast<int>(projs.size()) < expected; ++round) {
    SpMat z = random_hermitian_element(center, mix_seed(seed, 100 + round));
    projs = split_by(projs, z, center.blocks, tol::eig);
  }
  std::vector<SpMat> out;
  for (const auto& P : projs) {
    std::vector<Eigen::Triplet<cd>> trip;
    for (const auto& pc : P) {
      Mat B = pc.W * pc.W.adjoint();
      const int s = center.blocks.start[pc.block];
      for (Eigen::Index i = 0; i < B.rows(); ++i)
        for (Eigen::Index j = 0; j < B.cols(); ++j)
          if (std::abs(B(i, j)) > 1e-15) trip.emplace_back(s + i, s + j, B(i, j));
    }
    SpMat S(center.N, center.N);
    S.setFromTriplets(trip.begin(), trip.end());
    out.push_back(S);
  }
  return out;
}

int compressed_dimension(const MatrixAlgebra& alg, const SpMat& P) {
  const std::size_t s = alg.dim();
  if (s == 0) return 0;
  std::vector<SpMat> PE;
  PE.reserve(s);
  for (const auto& E : alg.elements) PE.push_back(SpMat(P * E));
  Mat G(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s));
  for (std::size_t k = 0; k < s; ++k)
    for (std::size_t l = k; l < s; ++l) {
      cd v = fro_inner(PE[k], PE[l]);
      G(k, l) = v;
      G(l, k) = std::conj(v);
    }
  Eigen::SelfAdjointEigenSolver<Mat> es(G);
  const RVec& ev = es.eigenvalues();
  const double top = ev(ev.size() - 1);
  if (top <= 1e-12) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 1e-8 * top) ++r;
  return r;
}

}  // namespace clab
