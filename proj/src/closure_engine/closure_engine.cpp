#include "clab/closure_engine.hpp"

#include <Eigen/Eigenvalues>

#include <deque>

namespace clab {

namespace {
using RowMat = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using BlockMap = Eigen::Map<RowMat>;
using ConstBlockMap = Eigen::Map<const RowMat>;
}  // namespace

BlockFrame BlockFrame::identity(Eigen::Index n) {
  Blocks b;
  b.start = {0};
  b.size = {static_cast<int>(n)};
  return BlockFrame(Mat(), b);
}

BlockFrame::BlockFrame(Mat W, Blocks blocks) : W_(std::move(W)), blocks_(std::move(blocks)) {
  n_ = blocks_.total();
  if (W_.size() != 0 && (W_.rows() != n_ || W_.cols() != n_)) throw Error("BlockFrame: unitary/blocks size mismatch");
  packed_ = 0;
  for (int s : blocks_.size) {
    offset_.push_back(packed_);
    packed_ += static_cast<Eigen::Index>(s) * s;
  }
}

Vec BlockFrame::pack_frame(const Mat& Xf) const {
  Vec v(packed_);
  for (int b = 0; b < blocks_.count(); ++b) {
    const int s = blocks_.start[b], g = blocks_.size[b];
    BlockMap(v.data() + offset_[b], g, g) = Xf.block(s, s, g, g);
  }
  return v;
}

Mat BlockFrame::unpack_frame(const Vec& v) const {
  Mat X = Mat::Zero(n_, n_);
  for (int b = 0; b < blocks_.count(); ++b) {
    const int s = blocks_.start[b], g = blocks_.size[b];
    X.block(s, s, g, g) = ConstBlockMap(v.data() + offset_[b], g, g);
  }
  return X;
}

Vec BlockFrame::pack(const Mat& X) const {
  if (is_identity()) return pack_frame(X);
  return pack_frame(W_.adjoint() * X * W_);
}

Mat BlockFrame::unpack(const Vec& v) const {
  if (is_identity()) return unpack_frame(v);
  return W_ * unpack_frame(v) * W_.adjoint();
}

double BlockFrame::off_block_residual(const Mat& X) const {
  const double total = X.norm();
  if (total == 0.0) return 0.0;
  Mat F = is_identity() ? X : Mat(W_.adjoint() * X * W_);
  for (int b = 0; b < blocks_.count(); ++b) {
    const int s = blocks_.start[b], g = blocks_.size[b];
    F.block(s, s, g, g).setZero();
  }
  return F.norm() / total;
}

Vec BlockFrame::multiply(const Vec& a, const Vec& b) const {
  Vec c(packed_);
  for (int k = 0; k < blocks_.count(); ++k) {
    const int g = blocks_.size[k];
    BlockMap(c.data() + offset_[k], g, g).noalias() =
        ConstBlockMap(a.data() + offset_[k], g, g) * ConstBlockMap(b.data() + offset_[k], g, g);
  }
  return c;
}

Vec BlockFrame::commutator(const Vec& a, const Vec& b) const {
  Vec c(packed_);
  for (int k = 0; k < blocks_.count(); ++k) {
    const int g = blocks_.size[k];
    ConstBlockMap A(a.data() + offset_[k], g, g), B(b.data() + offset_[k], g, g);
    BlockMap C(c.data() + offset_[k], g, g);
    C.noalias() = A * B;
    C.noalias() -= B * A;
  }
  return c;
}

Vec BlockFrame::adjoint(const Vec& a) const {
  Vec c(packed_);
  for (int k = 0; k < blocks_.count(); ++k) {
    const int g = blocks_.size[k];
    BlockMap(c.data() + offset_[k], g, g) = ConstBlockMap(a.data() + offset_[k], g, g).adjoint();
  }
  return c;
}

Vec BlockFrame::identity_vector() const {
  Vec v = Vec::Zero(packed_);
  for (int k = 0; k < blocks_.count(); ++k) {
    const int g = blocks_.size[k];
    for (int i = 0; i < g; ++i) v(offset_[k] + i * g + i) = 1.0;
  }
  return v;
}

Mat OperatorBasis::full_vectors() const {
  const Eigen::Index n = frame.hilbert_dim();
  Mat out(n * n, dim());
  for (Eigen::Index k = 0; k < dim(); ++k) out.col(k) = vec_rowmajor(element(k));
  return out;
}

double OperatorBasis::residual(const Mat& X) const {
  Vec p = frame.pack(X);
  const double off = frame.off_block_residual(X) * X.norm();
  const double outside = off * off;
  if (dim() > 0) p -= vectors * (vectors.adjoint() * p);
  return std::sqrt(outside + p.squaredNorm());
}

bool OperatorBasis::contains_identity(double tol) const {
  const Eigen::Index n = frame.hilbert_dim();
  const Mat I = Mat::Identity(n, n);
  return residual(I) <= tol * I.norm();
}

ExtendOutcome extend_basis(OperatorBasis& basis, const Vec& candidate, double tol) {
  const double n0 = candidate.norm();
  if (n0 == 0.0) return ExtendOutcome::Rejected;
  Vec r = candidate;
  for (int pass = 0; pass < 2; ++pass)
    for (Eigen::Index k = 0; k < basis.dim(); ++k) r -= basis.vectors.col(k) * basis.vectors.col(k).dot(r);
  const double rn = r.norm();
  if (rn <= tol * n0) return ExtendOutcome::Rejected;
  basis.vectors.conservativeResize(candidate.size(), basis.dim() + 1);
  basis.vectors.col(basis.dim() - 1) = r / rn;
  return ExtendOutcome::Added;
}

BlockFrame symmetry_frame(const MatrixAlgebra& commutant, std::uint64_t seed) {
  SpMat q = random_hermitian_element(commutant, seed);
  Mat Q = commutant.V.size() == 0 ? Mat(q) : Mat(commutant.V * Mat(q) * commutant.V.adjoint());
  Q = 0.5 * (Q + Q.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(Q);
  const RVec& ev = es.eigenvalues();
  const double radius = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  Blocks blocks;
  for (const auto& grp : cluster_sorted(ev, 1e-8 * std::max(radius, 1e-300))) {
    blocks.start.push_back(grp.front());
    blocks.size.push_back(static_cast<int>(grp.size()));
  }
  return BlockFrame(es.eigenvectors(), blocks);
}

namespace {

std::vector<Vec> pack_generators(const BlockFrame& frame, const std::vector<Mat>& gens, bool add_adjoints) {
  std::vector<Vec> out;
  for (const auto& g : gens) {
    const double n = g.norm();
    if (n == 0.0) continue;
    if (frame.off_block_residual(g) > 1e-8)
      throw Error("closure: generator is not block diagonal in the requested frame");
    Vec v = frame.pack(g) / n;
    out.push_back(v);
    if (add_adjoints) {
      Vec a = frame.adjoint(v);
      if ((a - v).norm() > 1e-12) out.push_back(a);
    }
  }
  return out;
}

// Candidates from one worklist element, orthogonalized as a block. Returns
// true once max_dim is reached.
template <class F>
bool push_batch(SpanBuilder& sb, std::deque<Eigen::Index>& queue, F&& op, const std::vector<Vec>& gens, const Vec& x,
                double tol, Eigen::Index max_dim) {
  Mat C(x.size(), static_cast<Eigen::Index>(gens.size()));
  Eigen::Index m = 0;
  for (const auto& g : gens) {
    Vec c = op(g);
    if (c.norm() <= 1e-10 * g.norm() * x.norm()) continue;
    C.col(m++) = c;
  }
  if (m == 0) return false;
  if (sb.size() + m > max_dim) {
    // Near the cap: add one at a time so the cap is hit exactly.
    for (Eigen::Index j = 0; j < m && sb.size() < max_dim; ++j)
      if (sb.add(C.col(j), tol)) queue.push_back(sb.size() - 1);
    return sb.size() >= max_dim;
  }
  Eigen::Index next = sb.size();
  for (char a : sb.add_batch(C.leftCols(m), tol))
    if (a) queue.push_back(next++);
  return sb.size() >= max_dim;
}

}  // namespace

Mat lie_span(const BlockFrame& frame, const std::vector<Vec>& gens, double tol, Eigen::Index max_dim, bool& complete) {
  const Eigen::Index N = frame.packed_size();
  if (max_dim < 0 || max_dim > N) max_dim = N;
  complete = true;
  SpanBuilder sb(N, 64);
  std::deque<Eigen::Index> queue;
  for (const auto& g : gens) {
    if (sb.size() >= max_dim) break;
    if (sb.add(g, tol)) queue.push_back(sb.size() - 1);
  }
  while (!queue.empty()) {
    const Vec x = sb.column(queue.front());
    queue.pop_front();
    if (push_batch(sb, queue, [&](const Vec& g) { return frame.commutator(g, x); }, gens, x, tol, max_dim)) {
      complete = max_dim >= N;
      return sb.basis();
    }
  }
  return sb.basis();
}

Mat associative_span(const BlockFrame& frame, const std::vector<Vec>& gens, double tol, Eigen::Index max_dim,
                     bool& complete) {
  const Eigen::Index N = frame.packed_size();
  if (max_dim < 0 || max_dim > N) max_dim = N;
  complete = true;
  SpanBuilder sb(N, 64);
  std::deque<Eigen::Index> queue;
  Vec one = frame.identity_vector();
  sb.add(one, tol);
  queue.push_back(0);
  while (!queue.empty()) {
    const Vec x = sb.column(queue.front());
    queue.pop_front();
    if (push_batch(sb, queue, [&](const Vec& g) { return frame.multiply(g, x); }, gens, x, tol, max_dim)) {
      complete = max_dim >= N;
      return sb.basis();
    }
  }
  return sb.basis();
}

OperatorBasis lie_closure(const std::vector<Mat>& gens, const ChainGeometry& geom, const ClosureOptions& opt) {
  OperatorBasis out;
  out.geometry = geom;
  out.frame = opt.frame ? *opt.frame : BlockFrame::identity(geom.dim());
  out.span_label = "dynamical Lie algebra";
  out.vectors = lie_span(out.frame, pack_generators(out.frame, gens, false), opt.tol, opt.max_dim, out.complete);
  return out;
}

OperatorBasis lie_closure(const GateSet& gates, const ClosureOptions& opt) {
  return lie_closure(gates.dense_generators(), gates.geometry, opt);
}

OperatorBasis associative_closure(const std::vector<Mat>& seeds, const ChainGeometry& geom, const ClosureOptions& opt) {
  OperatorBasis out;
  out.geometry = geom;
  out.frame = opt.frame ? *opt.frame : BlockFrame::identity(geom.dim());
  out.span_label = "bond algebra";
  out.vectors =
      associative_span(out.frame, pack_generators(out.frame, seeds, true), opt.tol, opt.max_dim, out.complete);
  return out;
}

}  // namespace clab
