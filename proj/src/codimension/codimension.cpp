#include "clab/codimension.hpp"

#include <cmath>

namespace clab {

namespace {

Mat generator_vectors(const GateSet& gates) {
  const Eigen::Index n = gates.geometry.dim();
  Mat H(n * n, static_cast<Eigen::Index>(gates.size()));
  for (std::size_t a = 0; a < gates.size(); ++a) H.col(a) = vec_rowmajor(Mat(gates.generators[a].op.matrix()));
  return H;
}

OperatorBasis flat_basis(const ChainGeometry& geom, Mat cols, const std::string& label) {
  OperatorBasis out;
  out.geometry = geom;
  out.frame = BlockFrame::identity(geom.dim());
  out.vectors = std::move(cols);
  out.span_label = label;
  return out;
}

bool has_identity(const OperatorBasis& b) { return b.dim() > 0 && b.contains_identity(); }

}  // namespace

Mat overlap_matrix(const OperatorBasis& center, const GateSet& gates) {
  if (!center.geometry.same_space(gates.geometry)) throw Error("overlap_matrix: geometry mismatch");
  if (center.dim() == 0 || gates.size() == 0) return Mat::Zero(center.dim(), gates.size());
  return center.full_vectors().adjoint() * generator_vectors(gates);
}

OperatorBasis center_without_identity(const OperatorBasis& center) {
  const Eigen::Index n = center.geometry.dim();
  Mat Z = center.full_vectors();
  Vec e = vec_rowmajor(Mat::Identity(n, n)) / std::sqrt(static_cast<double>(n));
  if (Z.cols() > 0) Z -= e * (e.adjoint() * Z);
  return flat_basis(center.geometry, Z.cols() ? orthonormal_columns(Z, 1e-8) : Z, "center without identity");
}

int codim_weak(const OperatorBasis& center, const GateSet& gates) {
  OperatorBasis z = center_without_identity(center);
  if (z.dim() == 0) return 0;
  Mat S = overlap_matrix(z, gates);
  // Rank relative to the generator scale, so an all-zero S has rank 0.
  double scale = 0;
  for (const auto& g : gates.generators) scale = std::max(scale, Mat(g.op.matrix()).norm());
  Eigen::JacobiSVD<Mat> svd(S);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol::rank * std::max(scale, 1e-300)) ++r;
  return static_cast<int>(z.dim()) - r;
}

int codim_exact(const OperatorBasis& bond, const OperatorBasis& dla) {
  const int b = static_cast<int>(bond.dim()) - (has_identity(bond) ? 1 : 0);
  const int g = static_cast<int>(dla.dim()) - (has_identity(dla) ? 1 : 0);
  return b - g;
}

OperatorBasis missing_scar_basis(const OperatorBasis& center, const GateSet& gates) {
  OperatorBasis z = center_without_identity(center);
  if (z.dim() == 0) return z;
  Mat S = overlap_matrix(z, gates);
  // <h_a|Z> = sum_l c_l conj(S(l, a)), so the coefficients live in null(S^H).
  Mat null = psd_nullspace(S * S.adjoint(), tol::null);
  if (S.norm() < tol::rank) null = Mat::Identity(z.dim(), z.dim());
  Mat cols = z.vectors * null;
  OperatorBasis out = flat_basis(center.geometry, cols.cols() ? orthonormal_columns(cols, 1e-8) : cols, "missing scars");
  return out;
}

Operator missing_unitary(const Operator& scar, double theta, const std::vector<Operator>& sector_projs) {
  const Eigen::Index n = scar.dim();
  const Mat X = scar.dense();
  Mat U = Mat::Zero(n, n), rebuilt = Mat::Zero(n, n);
  for (const auto& P : sector_projs) {
    const Mat Pd = P.dense();
    const double r = Pd.trace().real();
    if (r < 0.5) continue;
    const cd c = (Pd * X).trace() / r;
    rebuilt += c * Pd;
    U += std::exp(cd(0, theta) * c) * Pd;
  }
  if ((rebuilt - X).norm() > 1e-8 * std::max(1.0, X.norm()))
    throw Error("missing_unitary: operator is not a combination of the sector projectors");
  if ((U.adjoint() * U - Mat::Identity(n, n)).norm() > 1e-9)
    throw Error("missing_unitary: result is not unitary (non-hermitian scar?)");
  return Operator(scar.geometry(), U);
}

CenterProjectionCheck center_projection_check(const OperatorBasis& dla, const OperatorBasis& center,
                                              const GateSet& gates) {
  CenterProjectionCheck c;
  const Mat Z = center.full_vectors();
  const Mat A = Z.adjoint() * dla.full_vectors();
  const Mat B = Z.adjoint() * generator_vectors(gates);
  Mat AB(Z.cols(), A.cols() + B.cols());
  AB << A, B;
  const double scale = std::max(1.0, std::max(A.norm(), B.norm()));
  auto rank = [&](const Mat& M) {
    if (M.size() == 0) return 0;
    Eigen::JacobiSVD<Mat> svd(M);
    int r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > 1e-8 * scale) ++r;
    return r;
  };
  c.dla_rank = rank(A);
  c.generator_rank = rank(B);
  c.joint_rank = rank(AB);
  return c;
}

}  // namespace clab
