#pragma once

#include "clab/core.hpp"

#include <cstdint>
#include <vector>

namespace clab {

// Row-major vectorization: entry (i, j) of an n x n matrix sits at i * n + j.
Vec vec_rowmajor(const Mat& X);
Mat unvec_rowmajor(const Vec& v, Eigen::Index n);

cd fro_inner(const Mat& A, const Mat& B);
cd fro_inner(const SpMat& A, const SpMat& B);

int numerical_rank(const Mat& A, double rel = tol::rank);
// Orthonormal basis of the column span, numerical rank decided with `rel`.
Mat orthonormal_columns(const Mat& A, double rel = tol::rank);
// Eigenvectors of a PSD hermitian matrix with eigenvalue <= rel * max eigenvalue.
Mat psd_nullspace(const Mat& H, double rel = tol::null, double abs_floor = 0.0);
// Orthonormal basis of span(A) ∩ span(B); A, B must have orthonormal columns.
Mat subspace_intersection(const Mat& A, const Mat& B, double angle = tol::angle);
bool same_span(const Mat& A, const Mat& B, double angle = tol::angle);
// Largest residual of the columns of X outside span(B) (B orthonormal).
double span_residual(const Mat& B, const Mat& X);

// Consecutive groups of sorted eigenvalues whose neighbours differ by <= gap.
std::vector<std::vector<int>> cluster_sorted(const RVec& evals, double gap);

// Incremental orthonormal basis with one re-orthogonalization pass.
class SpanBuilder {
 public:
  explicit SpanBuilder(Eigen::Index n, Eigen::Index reserve = 16);
  Eigen::Index size() const { return k_; }
  Eigen::Index ambient() const { return n_; }
  // Adds v when its residual exceeds rel * |v| and |v| exceeds abs_floor.
  bool add(const Vec& v, double rel = tol::rank, double abs_floor = 0.0, double* residual = nullptr);
  // Adds the columns of C in order; block projection first, then against the
  // columns accepted earlier in the same batch. Returns the accepted flags.
  std::vector<char> add_batch(const Mat& C, double rel = tol::rank);
  Mat basis() const { return Q_.leftCols(k_); }
  Eigen::Ref<const Mat> view() const { return Q_.leftCols(k_); }
  Vec column(Eigen::Index i) const { return Q_.col(i); }

 private:
  Eigen::Index n_;
  Eigen::Index k_ = 0;
  Mat Q_;
};

// Block layout of a frame: consecutive index ranges.
struct Blocks {
  std::vector<int> start;
  std::vector<int> size;
  int count() const { return static_cast<int>(start.size()); }
  int total() const;
  int block_of(int index) const;
};

// A †-closed subspace of N x N matrices. Elements are stored in the frame V
// (element in original coordinates = V E V^†) and are block diagonal with
// respect to `blocks`. An empty V means the identity frame.
struct MatrixAlgebra {
  Eigen::Index N = 0;
  Mat V;
  Blocks blocks;
  std::vector<SpMat> elements;  // Frobenius-orthonormal

  std::size_t dim() const { return elements.size(); }
  Mat original(std::size_t k) const;
  SpMat to_frame(const Mat& X) const;  // V^† X V, sparsified on the block pattern
  Mat frame_dense(const Mat& X) const;  // V^† X V
};

struct SolveOptions {
  enum class Method { Auto, Dense, Compressed };
  Method method = Method::Auto;
  Eigen::Index dense_limit = 256;           // dense P2 route when N^2 <= dense_limit
  Eigen::Index max_unknowns = 8000;         // compressed unknown count limit
  Eigen::Index max_super_dim = 1024;        // operator-space dimension for full-space super solves
  std::uint64_t seed = 0x5eed;
};

// All X with [X, g] = 0 for every (hermitian) g, via the nullspace of sum_g L_g^2.
MatrixAlgebra commutant_of(const std::vector<Mat>& gens, const SolveOptions& opt = {});
MatrixAlgebra commutant_of_dense(const std::vector<Mat>& gens);

// Center of a †-closed matrix algebra, returned in the same frame.
MatrixAlgebra algebra_center(const MatrixAlgebra& alg, std::uint64_t seed);

// Spectral projectors of the center (frame coordinates). Refines with fresh
// random elements until `expected` projectors are found or rounds run out.
std::vector<SpMat> central_projectors(const MatrixAlgebra& center, std::uint64_t seed, int expected,
                                      int max_rounds = 8);

// Dimension of span{ P * E_k } for the algebra elements E_k.
int compressed_dimension(const MatrixAlgebra& alg, const SpMat& P);

// Random hermitian element of the algebra, unit Frobenius norm (frame coordinates).
SpMat random_hermitian_element(const MatrixAlgebra& alg, std::uint64_t seed);

}  // namespace clab
