#include "clab/commutant_solver.hpp"

#include <cmath>
#include <random>

namespace clab {

MatrixAlgebra commutant_algebra(const GateSet& gates, const SolveOptions& opt) {
  std::vector<Mat> gens = gates.dense_nontrivial();
  if (gens.empty()) gens.push_back(Mat::Zero(gates.geometry.dim(), gates.geometry.dim()));
  return commutant_of(gens, opt);
}

OperatorBasis to_basis(const MatrixAlgebra& alg, const ChainGeometry& geom, const std::string& label) {
  OperatorBasis out;
  out.geometry = geom;
  out.frame = BlockFrame::identity(alg.N);
  out.span_label = label;
  out.vectors.resize(alg.N * alg.N, static_cast<Eigen::Index>(alg.dim()));
  for (std::size_t k = 0; k < alg.dim(); ++k) out.vectors.col(k) = vec_rowmajor(alg.original(k));
  return out;
}

MatrixAlgebra to_algebra(const OperatorBasis& basis) {
  MatrixAlgebra alg;
  alg.N = basis.frame.hilbert_dim();
  alg.blocks.start = {0};
  alg.blocks.size = {static_cast<int>(alg.N)};
  for (Eigen::Index k = 0; k < basis.dim(); ++k) {
    SpMat E = basis.element(k).sparseView(1.0, 1e-14);
    alg.elements.push_back(E);
  }
  return alg;
}

OperatorBasis commutant(const GateSet& gates, const SolveOptions& opt) {
  return to_basis(commutant_algebra(gates, opt), gates.geometry, "commutant");
}

OperatorBasis center(const OperatorBasis& bond, const OperatorBasis& comm, double angle) {
  OperatorBasis out;
  out.geometry = comm.geometry;
  out.frame = BlockFrame::identity(comm.frame.hilbert_dim());
  out.span_label = "center";
  // Both sides orthonormal; the commutant is usually the smaller one.
  out.vectors = subspace_intersection(comm.full_vectors(), bond.full_vectors(), angle);
  return out;
}

OperatorBasis center_of(const OperatorBasis& algebra, std::uint64_t seed) {
  return to_basis(algebra_center(to_algebra(algebra), seed), algebra.geometry, "center");
}

std::vector<Operator> sector_projectors(const OperatorBasis& center, std::uint64_t seed, int max_rounds) {
  const int expected = static_cast<int>(center.dim());
  if (expected == 0) throw Error("sector_projectors: empty center");
  if (expected >= 2) {
    // Closure under multiplication, probed on a random product.
    Mat z1 = Mat::Zero(center.frame.hilbert_dim(), center.frame.hilbert_dim()), z2 = z1;
    std::mt19937_64 rng(mix_seed(seed, 7));
    std::normal_distribution<double> nd;
    for (Eigen::Index k = 0; k < center.dim(); ++k) {
      z1 += nd(rng) * center.element(k);
      z2 += nd(rng) * center.element(k);
    }
    Mat p = z1 * z2;
    if (center.residual(p) > 1e-7 * std::max(1.0, p.norm()))
      throw Error("sector_projectors: center basis is not closed under multiplication");
  }
  MatrixAlgebra alg = to_algebra(center);
  std::vector<SpMat> ps = central_projectors(alg, seed, expected, max_rounds);
  if (static_cast<int>(ps.size()) != expected)
    throw Error("sector_projectors: found " + std::to_string(ps.size()) + " projectors, expected " +
                std::to_string(expected) + " after " + std::to_string(max_rounds) + " refinement rounds");
  std::vector<Operator> out;
  for (auto& P : ps) out.emplace_back(center.geometry, P, HermitianFlag::Yes);
  return out;
}

namespace {

int projected_rank(const Mat& P, const OperatorBasis& basis) {
  if (basis.dim() == 0) return 0;
  Mat cols;
  if (basis.frame.off_block_residual(P) < 1e-9) {
    const Vec p = basis.frame.pack(P);
    cols.resize(basis.frame.packed_size(), basis.dim());
    for (Eigen::Index k = 0; k < basis.dim(); ++k) cols.col(k) = basis.frame.multiply(p, basis.vectors.col(k));
  } else {
    const Eigen::Index n = P.rows();
    cols.resize(n * n, basis.dim());
    for (Eigen::Index k = 0; k < basis.dim(); ++k) cols.col(k) = vec_rowmajor(P * basis.element(k));
  }
  return numerical_rank(cols, 1e-8);
}

int exact_sqrt(int x, const char* what) {
  const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(x))));
  if (r * r != x) throw Error(std::string("irrep_dimensions: restricted ") + what + " dimension " + std::to_string(x) + " is not a square");
  return r;
}

}  // namespace

IrrepDims irrep_dimensions(const Operator& proj, const OperatorBasis& bond, const OperatorBasis& comm) {
  const Mat P = proj.dense();
  IrrepDims out;
  out.rank = static_cast<int>(std::lround(P.trace().real()));
  out.D = exact_sqrt(projected_rank(P, bond), "bond");
  out.d = exact_sqrt(projected_rank(P, comm), "commutant");
  if (out.D * out.d != out.rank)
    throw Error("irrep_dimensions: D*d = " + std::to_string(out.D * out.d) + " but rank(P) = " + std::to_string(out.rank));
  return out;
}

double ProjectorCheck::worst() const {
  return std::max(std::max(idempotency, orthogonality), std::max(completeness, commutation));
}

ProjectorCheck check_projectors(const std::vector<Operator>& projs, const GateSet& gates) {
  ProjectorCheck c;
  if (projs.empty()) return c;
  SpMat sum(projs.front().dim(), projs.front().dim());
  for (std::size_t a = 0; a < projs.size(); ++a) {
    const SpMat& P = projs[a].matrix();
    sum += P;
    c.idempotency = std::max(c.idempotency, SpMat(P * P - P).norm());
    for (std::size_t b = a + 1; b < projs.size(); ++b)
      c.orthogonality = std::max(c.orthogonality, SpMat(P * projs[b].matrix()).norm());
    for (const auto& g : gates.generators)
      c.commutation = std::max(c.commutation, SpMat(P * g.op.matrix() - g.op.matrix() * P).norm());
  }
  SpMat I(sum.rows(), sum.cols());
  I.setIdentity();
  c.completeness = SpMat(sum - I).norm();
  return c;
}

}  // namespace clab
