#pragma once

#include "clab/gate_catalog.hpp"
#include "clab/linalg.hpp"

#include <string>
#include <vector>

namespace clab {

// Unitary change of basis W together with a block layout. Operators that are
// block diagonal in this frame are stored "packed": the entries of each
// diagonal block of W^† X W, row-major, concatenated block by block.
// The identity frame with a single block packs to the row-major vectorization.
class BlockFrame {
 public:
  BlockFrame() = default;
  static BlockFrame identity(Eigen::Index n);
  BlockFrame(Mat W, Blocks blocks);

  Eigen::Index hilbert_dim() const { return n_; }
  Eigen::Index packed_size() const { return packed_; }
  const Blocks& blocks() const { return blocks_; }
  const Mat& unitary() const { return W_; }  // empty means identity
  bool is_identity() const { return W_.size() == 0; }

  Vec pack_frame(const Mat& Xf) const;
  Mat unpack_frame(const Vec& v) const;
  Vec pack(const Mat& X) const;
  Mat unpack(const Vec& v) const;
  // Relative norm of the part of W^† X W outside the diagonal blocks.
  double off_block_residual(const Mat& X) const;

  Vec multiply(const Vec& a, const Vec& b) const;
  Vec commutator(const Vec& a, const Vec& b) const;
  Vec adjoint(const Vec& a) const;
  Vec identity_vector() const;

 private:
  Eigen::Index n_ = 0;
  Eigen::Index packed_ = 0;
  Mat W_;
  Blocks blocks_;
  std::vector<Eigen::Index> offset_;
};

// Hilbert-Schmidt orthonormal basis of an operator subspace, stored packed in `frame`.
struct OperatorBasis {
  ChainGeometry geometry;
  BlockFrame frame;
  Mat vectors;  // packed_size x dim, orthonormal columns
  std::string span_label;
  bool complete = true;

  Eigen::Index dim() const { return vectors.cols(); }
  Mat element(Eigen::Index k) const { return frame.unpack(vectors.col(k)); }
  Operator op(Eigen::Index k) const { return Operator(geometry, element(k)); }
  // dim(H)^2 x dim matrix of row-major vectorized elements.
  Mat full_vectors() const;
  // Residual of X outside the span (X in original coordinates).
  double residual(const Mat& X) const;
  bool contains_identity(double tol = 1e-8) const;
};

enum class ExtendOutcome { Added, Rejected };
// Modified Gram-Schmidt with one re-orthogonalization pass. Adds the candidate
// when its residual exceeds tol times its norm.
ExtendOutcome extend_basis(OperatorBasis& basis, const Vec& candidate, double tol = tol::rank);

struct ClosureOptions {
  double tol = tol::rank;
  Eigen::Index max_dim = -1;          // -1 means packed_size
  const BlockFrame* frame = nullptr;  // defaults to the identity frame
};

// Frame in which every element of the bond algebra is block diagonal: the
// eigenbasis of a random hermitian element of the commutant.
BlockFrame symmetry_frame(const MatrixAlgebra& commutant, std::uint64_t seed);

// Complex span of the generators and all nested commutators.
OperatorBasis lie_closure(const GateSet& gates, const ClosureOptions& opt = {});
OperatorBasis lie_closure(const std::vector<Mat>& gens, const ChainGeometry& geom, const ClosureOptions& opt = {});

// Unital *-algebra generated by the seeds.
OperatorBasis associative_closure(const std::vector<Mat>& seeds, const ChainGeometry& geom,
                                  const ClosureOptions& opt = {});

// Packed-level closures shared with the superoperator code. `complete` is set
// to false when max_dim stopped the worklist.
Mat lie_span(const BlockFrame& frame, const std::vector<Vec>& gens, double tol, Eigen::Index max_dim, bool& complete);
Mat associative_span(const BlockFrame& frame, const std::vector<Vec>& gens, double tol, Eigen::Index max_dim,
                     bool& complete);

}  // namespace clab
