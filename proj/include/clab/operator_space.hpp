#pragma once

#include "clab/core.hpp"

#include <array>
#include <vector>

namespace clab {

enum class Boundary { Open, Periodic };

const char* to_string(Boundary b);

// Site 1 is the slowest index of every Kronecker product.
struct ChainGeometry {
  int num_sites = 0;
  std::vector<int> local_dims;
  Boundary boundary = Boundary::Open;

  static ChainGeometry qubits(int L, Boundary b = Boundary::Open);
  static ChainGeometry qutrits(int L, Boundary b = Boundary::Open);

  Eigen::Index dim() const;
  // Throws Error on malformed geometry, SizeLimitError when dim() exceeds max_dim.
  void validate(Eigen::Index max_dim = 1 << 16) const;
  bool operator==(const ChainGeometry& o) const {
    return num_sites == o.num_sites && local_dims == o.local_dims && boundary == o.boundary;
  }
  bool same_space(const ChainGeometry& o) const { return local_dims == o.local_dims; }
};

enum class HermitianFlag { Yes, No, Unknown };

class Operator {
 public:
  Operator() = default;
  Operator(ChainGeometry g, SpMat m, HermitianFlag f = HermitianFlag::Unknown);
  Operator(ChainGeometry g, const Mat& m, HermitianFlag f = HermitianFlag::Unknown);

  static Operator identity(const ChainGeometry& g);
  static Operator zero(const ChainGeometry& g);

  const ChainGeometry& geometry() const { return geom_; }
  const SpMat& matrix() const { return m_; }
  Mat dense() const { return Mat(m_); }
  Eigen::Index dim() const { return m_.rows(); }
  HermitianFlag hermitian_flag() const { return flag_; }

  // Max-norm of A - A^†.
  double hermiticity_defect() const;
  bool is_hermitian(double tol = tol::herm) const { return hermiticity_defect() <= tol; }
  Operator adjoint() const;
  double norm() const { return m_.norm(); }

  Operator operator+(const Operator& o) const;
  Operator operator-(const Operator& o) const;
  Operator operator*(const Operator& o) const;
  Operator operator*(cd s) const;

 private:
  ChainGeometry geom_;
  SpMat m_;
  HermitianFlag flag_ = HermitianFlag::Unknown;
};

struct VectorizedOperator {
  ChainGeometry geometry;
  Vec coefficients;  // row-major, length dim^2
};

struct SuperOperator {
  ChainGeometry geometry;
  SpMat entries;  // dim^2 x dim^2 acting on row-major vectorizations
  Vec apply(const Vec& v) const { return entries * v; }
};

// Local operator on the listed 1-based sites (in the given order), identity elsewhere.
Operator embed_local(const Mat& op_local, const std::vector<int>& sites, const ChainGeometry& geom);

cd hs_inner(const Operator& A, const Operator& B);
Operator commutator(const Operator& A, const Operator& B);

// L_K = K ⊗ 1 - 1 ⊗ K^T, so that L_K vec(O) = vec([K, O]).
SuperOperator adjoint_superop(const Operator& K);

VectorizedOperator vectorize(const Operator& O);
Operator devectorize(const VectorizedOperator& v);

// A superoperator is a four-index tensor S[i1 i2 ; i3 i4] (row pair, column pair).
// perm[k] is the slot that copy index k moves to; any permutation of {0,1,2,3}.
SuperOperator partial_transpose_pattern(const SuperOperator& S, const std::array<int, 4>& perm);

// Trace out `traced_sites` (1-based). Tracing every site gives a 1x1 operator
// on an empty geometry.
Operator partial_trace(const Operator& rho, const std::vector<int>& traced_sites);
Mat partial_trace_dense(const Mat& rho, const ChainGeometry& geom, const std::vector<int>& traced_sites);

// tr(rho_A^2) of a pure state for the region of 1-based sites.
double reduced_purity(const Vec& psi, const ChainGeometry& geom, const std::vector<int>& region);

// Standard single-qubit matrices. Spin operators are half the Pauli matrices.
Mat pauli(char c);
Mat spin(char c);

}  // namespace clab
