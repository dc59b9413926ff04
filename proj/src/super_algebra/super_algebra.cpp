#include "clab/super_algebra.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>

namespace clab {

AlgebraBundle analyze_algebras(const GateSet& gates, const SolveOptions& opt, std::uint64_t seed) {
  AlgebraBundle b;
  b.gates = gates;
  b.comm_algebra = commutant_algebra(gates, opt);
  b.comm = to_basis(b.comm_algebra, gates.geometry, "commutant");
  b.frame = symmetry_frame(b.comm_algebra, seed);
  ClosureOptions co;
  co.frame = &b.frame;
  b.bond = associative_closure(gates.dense_nontrivial(), gates.geometry, co);
  b.dla = lie_closure(gates, co);
  b.center = center(b.bond, b.comm);
  return b;
}

std::string to_string(Restriction r) {
  switch (r) {
    case Restriction::None: return "full";
    case Restriction::Bond: return "bond";
    case Restriction::Sector: return "sector";
  }
  return "?";
}

std::string to_string(Universality u) {
  switch (u) {
    case Universality::Universal: return "Universal";
    case Universality::WeaklyNonUniversal: return "WeaklyNonUniversal";
    case Universality::StronglyNonUniversal: return "StronglyNonUniversal";
  }
  return "?";
}

std::string SuperSpace::label() const {
  switch (kind) {
    case Restriction::None: return "full operator space";
    case Restriction::Bond: return "restricted to bond algebra";
    case Restriction::Sector: return "restricted to sector " + std::to_string(sector);
  }
  return "?";
}

Vec SuperSpace::coords(const Mat& X) const {
  Vec p = frame.pack(X);
  return F.size() ? Vec(F.adjoint() * p) : p;
}

Mat SuperSpace::op(const Vec& c) const { return frame.unpack(F.size() ? Vec(F * c) : c); }

Mat SuperSpace::restrict_ad_packed(const Vec& hp) const {
  const Eigen::Index n = dim(), P = frame.packed_size();
  Mat C(P, n);
  for (Eigen::Index b = 0; b < n; ++b) {
    Vec x;
    if (F.size()) {
      x = F.col(b);
    } else {
      x = Vec::Zero(P);
      x(b) = 1.0;
    }
    C.col(b) = frame.commutator(hp, x);
  }
  if (!F.size()) return C;
  Mat M = F.adjoint() * C;
  const double leak = (C - F * M).norm();
  if (leak > 1e-7 * std::max(1.0, C.norm())) throw Error("restrict_ad: operator does not preserve the subspace");
  return M;
}

Mat SuperSpace::restrict_ad(const Mat& h) const {
  if (frame.off_block_residual(h) > 1e-8) throw Error("restrict_ad: operator is not block diagonal in the frame");
  return restrict_ad_packed(frame.pack(h));
}

SuperSpace full_space(const ChainGeometry& geom, Eigen::Index max_dim) {
  const Eigen::Index N = geom.dim();
  if (N * N > max_dim)
    throw SizeLimitError("full operator space has dimension " + std::to_string(N * N) + " > limit " +
                         std::to_string(max_dim) + "; restrict to the bond algebra");
  SuperSpace s;
  s.geometry = geom;
  s.kind = Restriction::None;
  s.frame = BlockFrame::identity(N);
  return s;
}

SuperSpace bond_space(const OperatorBasis& bond) {
  SuperSpace s;
  s.geometry = bond.geometry;
  s.kind = Restriction::Bond;
  s.frame = bond.frame;
  s.F = bond.vectors;
  return s;
}

SuperSpace sector_space(const OperatorBasis& bond, const Operator& proj, int index) {
  const Mat P = proj.dense();
  if (bond.frame.off_block_residual(P) > 1e-8) throw Error("sector_space: projector is not in the bond frame");
  const Vec p = bond.frame.pack(P);
  Mat cols(bond.frame.packed_size(), bond.dim());
  for (Eigen::Index k = 0; k < bond.dim(); ++k)
    cols.col(k) = bond.frame.multiply(p, bond.frame.multiply(bond.vectors.col(k), p));
  SuperSpace s;
  s.geometry = bond.geometry;
  s.kind = Restriction::Sector;
  s.sector = index;
  s.frame = bond.frame;
  s.F = orthonormal_columns(cols, 1e-8);
  return s;
}

namespace {

Mat hermitian(const Mat& M) { return 0.5 * (M + M.adjoint()); }

SuperSpace make_space(const AlgebraBundle& b, Restriction r, int sector, const SolveOptions& opt) {
  switch (r) {
    case Restriction::None: return full_space(b.gates.geometry, opt.max_super_dim);
    case Restriction::Bond: return bond_space(b.bond);
    case Restriction::Sector: {
      auto projs = sector_projectors(b.center);
      if (sector < 0 || sector >= static_cast<int>(projs.size()))
        throw Error("sector index " + std::to_string(sector) + " out of range (" + std::to_string(projs.size()) +
                    " sectors)");
      return sector_space(b.bond, projs[sector], sector);
    }
  }
  throw Error("unknown restriction");
}

// L_K for random hermitian K inside the (†-closed) restricted space.
std::vector<Mat> random_inner_generators(const SuperSpace& space, std::uint64_t seed, int count = 4) {
  std::mt19937_64 rng(mix_seed(seed, 41));
  std::normal_distribution<double> nd;
  std::vector<Mat> out;
  const Eigen::Index n = space.dim();
  for (int t = 0; t < count; ++t) {
    Vec c(n);
    for (Eigen::Index i = 0; i < n; ++i) c(i) = cd(nd(rng), nd(rng));
    Vec k = space.packed(c);
    k = 0.5 * (k + space.frame.adjoint(k));
    out.push_back(hermitian(space.restrict_ad_packed(k)));
  }
  return out;
}

MatrixAlgebra flat_algebra(const Mat& packed, Eigen::Index n) {
  MatrixAlgebra alg;
  alg.N = n;
  alg.blocks.start = {0};
  alg.blocks.size = {static_cast<int>(n)};
  for (Eigen::Index k = 0; k < packed.cols(); ++k)
    alg.elements.push_back(unvec_rowmajor(packed.col(k), n).sparseView(1.0, 1e-14));
  return alg;
}

int exact_sqrt(int x) {
  const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(x))));
  if (r * r != x) throw Error("block decomposition: restricted super-commutant dimension " + std::to_string(x) +
                              " is not a square");
  return r;
}

// Krylov closure of the seeds under the acting matrices, appended to sb.
// With a block range R every candidate is projected back onto span(R), so
// rounding leakage cannot seed spurious directions.
void krylov_close(SpanBuilder& sb, const std::vector<Vec>& seeds, const std::vector<Mat>& acting,
                  const Mat* R = nullptr, double rel = tol::rank) {
  std::deque<Eigen::Index> queue;
  for (const auto& s : seeds)
    if (s.norm() > 1e-12 && sb.add(s, rel)) queue.push_back(sb.size() - 1);
  while (!queue.empty()) {
    const Vec x = sb.column(queue.front());
    queue.pop_front();
    for (const auto& a : acting) {
      Vec y = a * x;
      if (R) y = *R * (R->adjoint() * y);
      if (y.norm() <= 1e-10 * std::max(1.0, a.norm())) continue;
      if (sb.add(y, rel)) queue.push_back(sb.size() - 1);
    }
  }
}

}  // namespace

std::vector<Mat> super_generators(const SuperSpace& space, const GateSet& gates) {
  std::vector<Mat> out;
  for (const auto& g : gates.dense_nontrivial()) {
    Mat M = hermitian(space.restrict_ad(g));
    if (M.norm() > 1e-12) out.push_back(M);
  }
  return out;
}

Mat SuperAlgebra::vectors() const {
  const Eigen::Index n = algebra.N;
  Mat out(n * n, static_cast<Eigen::Index>(dim()));
  for (std::size_t k = 0; k < dim(); ++k) out.col(k) = vec_rowmajor(algebra.original(k));
  return out;
}

SuperAlgebra super_commutant(const SuperSpace& space, const GateSet& gates, const SolveOptions& opt) {
  std::vector<Mat> gens = super_generators(space, gates);
  if (gens.empty()) gens.push_back(Mat::Zero(space.dim(), space.dim()));
  SuperAlgebra out;
  out.space = space;
  out.algebra = commutant_of(gens, opt);
  out.label = "super-commutant (" + space.label() + ")";
  return out;
}

SuperAlgebra super_commutant(const AlgebraBundle& b, Restriction r, int sector, const SolveOptions& opt) {
  return super_commutant(make_space(b, r, sector, opt), b.gates, opt);
}

SuperAlgebra minimal_super_commutant(const SuperSpace& space, const OperatorBasis& comm, const SolveOptions& opt,
                                     std::uint64_t seed) {
  SuperAlgebra out;
  out.space = space;
  out.label = "minimal super-commutant (" + space.label() + ")";
  const Eigen::Index n = space.dim();
  if (space.kind == Restriction::None) {
    const Eigen::Index N = space.frame.hilbert_dim();
    const Mat I = Mat::Identity(N, N);
    std::vector<Mat> seeds;
    for (Eigen::Index k = 0; k < comm.dim(); ++k) {
      const Mat Q = comm.element(k);
      seeds.push_back(kroneckerProduct(Q, I).eval());
      seeds.push_back(kroneckerProduct(I, Mat(Q.transpose())).eval());
    }
    const Vec one = vec_rowmajor(I);
    seeds.push_back(one * one.adjoint());
    const BlockFrame flat = BlockFrame::identity(n);
    std::vector<Vec> packed;
    for (const auto& s : seeds) {
      const double nr = s.norm();
      if (nr == 0.0) continue;
      packed.push_back(vec_rowmajor(s) / nr);
      Vec a = flat.adjoint(packed.back());
      if ((a - packed.back()).norm() > 1e-12) packed.push_back(a);
    }
    bool complete = true;
    out.algebra = flat_algebra(associative_span(flat, packed, tol::rank, -1, complete), n);
    return out;
  }
  out.algebra = commutant_of(random_inner_generators(space, seed), opt);
  return out;
}

SuperAlgebra minimal_super_commutant(const AlgebraBundle& b, Restriction r, int sector, const SolveOptions& opt) {
  return minimal_super_commutant(make_space(b, r, sector, opt), b.comm, opt);
}

FramedSuperBasis framed(const SuperAlgebra& sc) {
  if (sc.space.kind != Restriction::None) throw Error("framed: only full-space super-algebras have a matrix-unit frame");
  FramedSuperBasis out;
  out.geometry = sc.space.geometry;
  out.label = sc.label;
  const Eigen::Index N = sc.space.frame.hilbert_dim();
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j) {
      SpMat E(N, N);
      E.insert(i, j) = 1.0;
      out.frame.push_back(E);
    }
  for (std::size_t k = 0; k < sc.dim(); ++k) out.q.push_back(sc.algebra.original(k).sparseView(1.0, 1e-13));
  return out;
}

double containment_residual(const SuperAlgebra& a, const SuperAlgebra& b) {
  if (a.algebra.N != b.algebra.N) throw Error("containment_residual: spaces differ");
  double worst = 0.0;
  for (std::size_t k = 0; k < a.dim(); ++k) {
    const Mat X = a.algebra.original(k);
    const Mat Xb = b.algebra.frame_dense(X);
    double inside = 0.0;
    for (const auto& E : b.algebra.elements) inside += std::norm(fro_inner(Mat(E), Xb));
    worst = std::max(worst, std::sqrt(std::max(0.0, Xb.squaredNorm() - inside)) / std::max(X.norm(), 1e-300));
  }
  return worst;
}

bool BlockDecomposition::consistent() const {
  for (const auto& b : blocks)
    if (!b.krylov_consistent) return false;
  return true;
}

BlockDecomposition decompose(const SuperSpace& space, const SuperAlgebra& sc, const std::vector<Mat>& acting,
                             const GateSet& gates, std::uint64_t seed) {
  BlockDecomposition out;
  out.space_label = space.label();
  out.space_dim = space.dim();
  const MatrixAlgebra& alg = sc.algebra;
  const MatrixAlgebra z = algebra_center(alg, seed);
  const int expected = static_cast<int>(z.dim());
  std::vector<SpMat> projs = central_projectors(z, seed, expected, 12);
  if (static_cast<int>(projs.size()) != expected)
    throw Error("block decomposition: " + std::to_string(projs.size()) + " central projectors for a center of dimension " +
                std::to_string(expected));

  std::vector<Vec> gen_coords;
  for (const auto& g : gates.dense_nontrivial()) gen_coords.push_back(space.coords(g));

  for (std::size_t k = 0; k < projs.size(); ++k) {
    const SpMat& P = projs[k];
    Block blk;
    const int r = static_cast<int>(std::lround(Mat(P).trace().real()));
    blk.degeneracy = exact_sqrt(compressed_dimension(alg, P));
    blk.krylov_dim = r / blk.degeneracy;
    if (blk.krylov_dim * blk.degeneracy != r) throw Error("block decomposition: D*d does not match the block rank");

    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian(Mat(P)));
    const Mat W = es.eigenvectors().rightCols(r);  // frame coordinates
    blk.coords = alg.V.size() ? Mat(alg.V * W) : W;

    for (const auto& c : gen_coords)
      if ((blk.coords.adjoint() * c).norm() > 1e-9 * std::max(c.norm(), 1e-300)) blk.inside_bond = true;

    for (int probe = 0; probe < 2; ++probe) {
      const Mat Y = Mat(random_hermitian_element(alg, mix_seed(seed, 1000 + 17 * k + probe)));
      Mat Yr = hermitian(W.adjoint() * Y * W);
      Eigen::SelfAdjointEigenSolver<Mat> ys(Yr);
      const RVec& ev = ys.eigenvalues();
      const double radius = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
      auto groups = cluster_sorted(ev, tol::eig * std::max(radius, 1e-300));
      const auto& first = groups.front();
      Vec v = blk.coords * ys.eigenvectors().col(first.front());
      SpanBuilder sb(space.dim());
      krylov_close(sb, {v}, acting, &blk.coords, 1e-7);
      blk.krylov_probe.push_back(static_cast<int>(sb.size()));
      if (static_cast<int>(sb.size()) != blk.krylov_dim || static_cast<int>(first.size()) != blk.krylov_dim)
        blk.krylov_consistent = false;
    }

    blk.basis.geometry = space.geometry;
    blk.basis.frame = space.frame;
    blk.basis.vectors = space.packed(blk.coords);
    out.blocks.push_back(std::move(blk));
  }
  std::stable_sort(out.blocks.begin(), out.blocks.end(), [](const Block& a, const Block& b) {
    if (a.krylov_dim != b.krylov_dim) return a.krylov_dim > b.krylov_dim;
    return a.degeneracy > b.degeneracy;
  });
  for (std::size_t k = 0; k < out.blocks.size(); ++k) {
    auto& b = out.blocks[k];
    b.label = "B" + std::to_string(k) + "[D=" + std::to_string(b.krylov_dim) + ",d=" + std::to_string(b.degeneracy) + "]";
    b.basis.span_label = b.label;
  }
  return out;
}

BlockDecomposition block_decomposition(const AlgebraBundle& b, Restriction r, int sector, const SolveOptions& opt) {
  SuperSpace space = make_space(b, r, sector, opt);
  SuperAlgebra sc = super_commutant(space, b.gates, opt);
  return decompose(space, sc, super_generators(space, b.gates), b.gates);
}

BlockDecomposition minimal_block_decomposition(const AlgebraBundle& b, Restriction r, int sector,
                                               const SolveOptions& opt) {
  SuperSpace space = make_space(b, r, sector, opt);
  const std::uint64_t seed = 0x3141;
  SuperAlgebra sct = minimal_super_commutant(space, b.comm, opt, seed);
  std::vector<Mat> acting;
  if (r == Restriction::None) {
    // L_K for random hermitian K in the bond algebra.
    std::mt19937_64 rng(mix_seed(seed, 43));
    std::normal_distribution<double> nd;
    for (int t = 0; t < 4; ++t) {
      Vec c(b.bond.dim());
      for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = cd(nd(rng), nd(rng));
      Mat K = b.bond.frame.unpack(b.bond.vectors * c);
      K = 0.5 * (K + K.adjoint()).eval();
      acting.push_back(hermitian(space.restrict_ad(K)));
    }
  } else {
    acting = random_inner_generators(space, seed);
  }
  return decompose(space, sct, acting, b.gates);
}

OperatorBasis dla_from_blocks(const BlockDecomposition& decomp, const SuperSpace& space, const GateSet& gates) {
  const std::vector<Mat> acting = super_generators(space, gates);
  std::vector<Vec> gen_coords;
  for (const auto& g : gates.dense_generators()) gen_coords.push_back(space.coords(g));
  SpanBuilder sb(space.dim());
  for (const auto& blk : decomp.blocks) {
    std::vector<Vec> seeds;
    for (const auto& c : gen_coords) {
      Vec s = blk.coords * (blk.coords.adjoint() * c);
      if (s.norm() > 1e-9 * c.norm()) seeds.push_back(s);
    }
    krylov_close(sb, seeds, acting, &blk.coords);
  }
  OperatorBasis out;
  out.geometry = space.geometry;
  out.frame = space.frame;
  out.vectors = space.packed(sb.basis());
  out.span_label = "dynamical Lie algebra (from blocks)";
  return out;
}

std::vector<std::string> constraint_report(const BlockDecomposition& actual, const BlockDecomposition& minimal) {
  std::vector<std::string> notes;
  if (actual.space_dim != minimal.space_dim) throw Error("constraint_report: decompositions live on different spaces");
  for (const auto& m : minimal.blocks) {
    std::vector<const Block*> hits;
    for (const auto& a : actual.blocks)
      if ((a.coords.adjoint() * m.coords).squaredNorm() > 0.5) hits.push_back(&a);
    if (hits.size() >= 2) {
      std::string s = "splitting: " + m.label + " splits into";
      for (const Block* a : hits) s += " " + a->label;
      notes.push_back(s);
    }
    for (const Block* a : hits)
      if (a->degeneracy > m.degeneracy)
        notes.push_back("degeneracy: " + a->label + " has d=" + std::to_string(a->degeneracy) + " above d=" +
                        std::to_string(m.degeneracy) + " of " + m.label);
  }
  return notes;
}

UniversalityReport classify(const AlgebraBundle& b, const SolveOptions& opt, bool with_notes) {
  UniversalityReport rep;
  rep.dim_dla = static_cast<int>(b.dla.dim());
  rep.dim_bond = static_cast<int>(b.bond.dim());
  rep.dim_comm = static_cast<int>(b.comm.dim());
  rep.dim_center = static_cast<int>(b.center.dim());
  rep.codim = codim_exact(b.bond, b.dla);
  rep.codim_weak = codim_weak(b.center, b.gates);
  rep.semi_universal = rep.codim == rep.codim_weak;

  const SuperSpace space = bond_space(b.bond);
  const SuperAlgebra sc = super_commutant(space, b.gates, opt);
  const std::uint64_t seed = 0x3141;
  const SuperAlgebra sct = minimal_super_commutant(space, b.comm, opt, seed);
  rep.dim_scomm = static_cast<int>(sc.dim());
  rep.dim_scommt = static_cast<int>(sct.dim());
  const bool same = rep.dim_scomm == rep.dim_scommt && containment_residual(sct, sc) < 1e-7;

  if (rep.codim == 0)
    rep.classification = Universality::Universal;
  else if (same)
    rep.classification = Universality::WeaklyNonUniversal;
  else
    rep.classification = Universality::StronglyNonUniversal;

  if (with_notes) {
    BlockDecomposition actual = decompose(space, sc, super_generators(space, b.gates), b.gates);
    BlockDecomposition minimal = decompose(space, sct, random_inner_generators(space, seed), b.gates);
    rep.constraint_notes = constraint_report(actual, minimal);
  }
  return rep;
}

UniversalityReport classify(const GateSet& gates, const SolveOptions& opt) {
  return classify(analyze_algebras(gates, opt), opt);
}

std::vector<SectorTracelessCheck> sector_traceless_check(const AlgebraBundle& b, const std::vector<Operator>& projs) {
  std::vector<SectorTracelessCheck> out;
  const BlockFrame& fr = b.dla.frame;
  for (std::size_t s = 0; s < projs.size(); ++s) {
    SectorTracelessCheck c;
    c.sector = static_cast<int>(s);
    c.D = irrep_dimensions(projs[s], b.bond, b.comm).D;
    if (c.D > 1) {
      const Vec p = fr.pack(projs[s].dense());
      const double pp = p.squaredNorm();
      double best = 0.0;
      for (Eigen::Index k = 0; k < b.dla.dim(); ++k) {
        Vec y = fr.multiply(p, fr.multiply(b.dla.vectors.col(k), p));
        y -= p * (p.dot(y) / pp);
        best = std::max(best, y.norm());
      }
      c.has_traceless = best > 1e-8;
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace clab
