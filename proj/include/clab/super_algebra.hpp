#pragma once

#include "clab/codimension.hpp"

#include <optional>

namespace clab {

// Everything the operator-level analysis produces for one gate set.
struct AlgebraBundle {
  GateSet gates;
  MatrixAlgebra comm_algebra;
  OperatorBasis comm;
  BlockFrame frame;  // symmetry frame, bond algebra block diagonal
  OperatorBasis bond;
  OperatorBasis dla;
  OperatorBasis center;
};
AlgebraBundle analyze_algebras(const GateSet& gates, const SolveOptions& opt = {}, std::uint64_t seed = 11);

enum class Restriction { None, Bond, Sector };
std::string to_string(Restriction r);

// An operator subspace invariant under every L_h, with an orthonormal frame.
// Coordinates of X are F^† pack(X); an empty F means the whole packed space.
struct SuperSpace {
  ChainGeometry geometry;
  Restriction kind = Restriction::None;
  int sector = -1;
  BlockFrame frame;
  Mat F;

  Eigen::Index dim() const { return F.size() ? F.cols() : frame.packed_size(); }
  std::string label() const;
  Vec coords(const Mat& X) const;
  Mat op(const Vec& c) const;
  // Packed vectors of the given coordinate columns.
  Mat packed(const Mat& C) const { return F.size() ? Mat(F * C) : C; }
  // Matrix of X -> [h, X] in these coordinates (h must preserve the space).
  Mat restrict_ad(const Mat& h) const;
  Mat restrict_ad_packed(const Vec& hp) const;
};

// Whole End(H); refuses when dim(H)^2 exceeds max_dim.
SuperSpace full_space(const ChainGeometry& geom, Eigen::Index max_dim = 1024);
SuperSpace bond_space(const OperatorBasis& bond);
// Pi A Pi for a central projector Pi of the bond algebra.
SuperSpace sector_space(const OperatorBasis& bond, const Operator& proj, int index);

// Restricted adjoint matrices of the non-identity generators.
std::vector<Mat> super_generators(const SuperSpace& space, const GateSet& gates);

struct SuperAlgebra {
  SuperSpace space;
  MatrixAlgebra algebra;  // n x n superoperators in space coordinates
  std::string label;
  std::size_t dim() const { return algebra.dim(); }
  // n^2 x dim orthonormal row-major vectorizations (original coordinates).
  Mat vectors() const;
};

// Superoperators commuting with every restricted L_h.
SuperAlgebra super_commutant(const SuperSpace& space, const GateSet& gates, const SolveOptions& opt = {});
SuperAlgebra super_commutant(const AlgebraBundle& b, Restriction r, int sector = -1, const SolveOptions& opt = {});

// Full space: unital algebra generated by Q1 (x) Q2^T and |1>><<1|.
// Bond or sector space: commutant of L_K for random K in the restricted
// algebra, which is the same algebra restricted to that space.
SuperAlgebra minimal_super_commutant(const SuperSpace& space, const OperatorBasis& comm, const SolveOptions& opt = {},
                                     std::uint64_t seed = 0x3141);
SuperAlgebra minimal_super_commutant(const AlgebraBundle& b, Restriction r, int sector = -1,
                                     const SolveOptions& opt = {});

// Superoperators written in an orthonormal operator frame {e_a}:
// Q = sum_ab q(a, b) |e_a>><<e_b|, with the q matrices Frobenius-orthonormal.
struct FramedSuperBasis {
  ChainGeometry geometry;
  std::vector<SpMat> frame;
  std::vector<SpMat> q;
  std::string label;
  std::size_t dim() const { return q.size(); }
};
// Full-space algebra in the matrix-unit frame (e_a = |i><j|, a = i n + j).
FramedSuperBasis framed(const SuperAlgebra& sc);

// Largest residual of the elements of `a` outside span(b).
double containment_residual(const SuperAlgebra& a, const SuperAlgebra& b);

struct Block {
  std::string label;
  int krylov_dim = 0;  // D
  int degeneracy = 0;  // d
  OperatorBasis basis;
  Mat coords;  // n x (D d) orthonormal columns in space coordinates
  bool inside_bond = false;  // some generator overlaps the block
  bool krylov_consistent = true;
  std::vector<int> krylov_probe;  // Krylov dimensions from the seeded probes
};

struct BlockDecomposition {
  std::string space_label;
  Eigen::Index space_dim = 0;
  std::vector<Block> blocks;
  bool consistent() const;
};

// Isotypic blocks of the algebra acting on `space` whose commutant is `sc`;
// `acting` must generate that algebra (used for the Krylov probes).
BlockDecomposition decompose(const SuperSpace& space, const SuperAlgebra& sc, const std::vector<Mat>& acting,
                             const GateSet& gates, std::uint64_t seed = 0xb10c);
BlockDecomposition block_decomposition(const AlgebraBundle& b, Restriction r, int sector = -1,
                                       const SolveOptions& opt = {});
// Same, for the minimal super-commutant.
BlockDecomposition minimal_block_decomposition(const AlgebraBundle& b, Restriction r, int sector = -1,
                                               const SolveOptions& opt = {});

// Direct sum over blocks of the Krylov closures of the projected generators.
OperatorBasis dla_from_blocks(const BlockDecomposition& decomp, const SuperSpace& space, const GateSet& gates);

std::vector<std::string> constraint_report(const BlockDecomposition& actual, const BlockDecomposition& minimal);

enum class Universality { Universal, WeaklyNonUniversal, StronglyNonUniversal };
std::string to_string(Universality u);

struct UniversalityReport {
  Universality classification = Universality::Universal;
  int dim_dla = 0, dim_bond = 0, dim_comm = 0, dim_center = 0;
  int dim_scomm = 0, dim_scommt = 0;  // restricted to the bond algebra
  int codim = 0;                      // identity direction excluded
  int codim_weak = 0;
  bool semi_universal = false;
  std::vector<std::string> constraint_notes;
};
UniversalityReport classify(const AlgebraBundle& b, const SolveOptions& opt = {}, bool with_notes = true);
UniversalityReport classify(const GateSet& gates, const SolveOptions& opt = {});

struct SectorTracelessCheck {
  int sector = 0;
  int D = 0;
  bool has_traceless = true;  // only meaningful when D > 1
};
// For every sector with D > 1, whether the DLA has a traceless component there.
std::vector<SectorTracelessCheck> sector_traceless_check(const AlgebraBundle& b,
                                                         const std::vector<Operator>& projs);

}  // namespace clab
