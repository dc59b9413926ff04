#pragma once

#include "clab/closure_engine.hpp"

namespace clab {

// Commutant of the gate set as a matrix algebra (compressed solver frame).
MatrixAlgebra commutant_algebra(const GateSet& gates, const SolveOptions& opt = {});

// Commutant as an orthonormal operator basis in the identity frame.
OperatorBasis commutant(const GateSet& gates, const SolveOptions& opt = {});
OperatorBasis to_basis(const MatrixAlgebra& alg, const ChainGeometry& geom, const std::string& label);
MatrixAlgebra to_algebra(const OperatorBasis& basis);

// Intersection of two operator subspaces through principal angles.
OperatorBasis center(const OperatorBasis& bond, const OperatorBasis& comm, double angle = tol::angle);
// Center of a single algebra (elements commuting with the whole algebra).
OperatorBasis center_of(const OperatorBasis& algebra, std::uint64_t seed = 0x7e57);

// Spectral projectors of the center; throws Error when the refinement does
// not reach dim(center) projectors.
std::vector<Operator> sector_projectors(const OperatorBasis& center, std::uint64_t seed = 0x5ec7, int max_rounds = 8);

struct IrrepDims {
  int D = 0;     // dimension of the bond-algebra irrep
  int d = 0;     // dimension of the commutant irrep (multiplicity)
  int rank = 0;  // rank of the projector
};
IrrepDims irrep_dimensions(const Operator& proj, const OperatorBasis& bond, const OperatorBasis& comm);

struct ProjectorCheck {
  double idempotency = 0;    // max ||P^2 - P||
  double orthogonality = 0;  // max ||P Q|| for distinct projectors
  double completeness = 0;   // ||sum P - 1||
  double commutation = 0;    // max ||[P, h]||
  double worst() const;
};
ProjectorCheck check_projectors(const std::vector<Operator>& projs, const GateSet& gates);

}  // namespace clab
