#pragma once

#include "clab/commutant_solver.hpp"

namespace clab {

// S(l, a) = hs_inner(Z_l, h_a) for center basis element Z_l and generator h_a.
Mat overlap_matrix(const OperatorBasis& center, const GateSet& gates);

// Orthonormal basis of the center with the identity direction projected out.
OperatorBasis center_without_identity(const OperatorBasis& center);

// dim(center) - rank(S), identity direction excluded. Exact for semi-universal
// sets, a lower bound otherwise.
int codim_weak(const OperatorBasis& center, const GateSet& gates);
// dim(bond) - dim(dla), identity direction excluded from both.
int codim_exact(const OperatorBasis& bond, const OperatorBasis& dla);

// Center elements orthogonal to the identity and to every generator.
OperatorBasis missing_scar_basis(const OperatorBasis& center, const GateSet& gates);

// exp(i theta scar), assembled from the sector projectors of the center.
Operator missing_unitary(const Operator& scar, double theta, const std::vector<Operator>& sector_projs);

struct CenterProjectionCheck {
  int dla_rank = 0;        // rank of the DLA projected onto the center
  int generator_rank = 0;  // rank of the generators projected onto the center
  int joint_rank = 0;
  bool equal() const { return dla_rank == generator_rank && joint_rank == dla_rank; }
};
// Projection of the DLA onto the center versus the span of projected generators.
CenterProjectionCheck center_projection_check(const OperatorBasis& dla, const OperatorBasis& center,
                                              const GateSet& gates);

}  // namespace clab
