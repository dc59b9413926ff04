#pragma once

// Structural identities checked over the catalog. Shared by the unit suite and
// the acceptance runner; each check returns a verdict and a one-line detail.

#include "clab/majorana.hpp"
#include "support/oracles.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace lemma {

using namespace clab;

struct Verdict {
  std::string name;
  bool ok = true;
  std::string detail;
};

struct CatalogCase {
  std::string name;
  int L;
};

// Every catalog set at a size where all checks stay cheap.
inline std::vector<CatalogCase> catalog_cases() {
  std::vector<CatalogCase> out;
  for (const auto& e : catalog()) out.push_back({e.name, e.local_dim == 3 ? 2 : 3});
  return out;
}

inline Verdict lie_homomorphism(int pairs = 50, std::uint64_t seed = 17) {
  // ad([A, B]) = [ad A, ad B] for random dense A, B on three qubits.
  const auto g = ChainGeometry::qubits(3);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int p = 0; p < pairs; ++p) {
    Mat A(8, 8), B(8, 8);
    for (Eigen::Index i = 0; i < 64; ++i) {
      A.data()[i] = cd(nd(rng), nd(rng));
      B.data()[i] = cd(nd(rng), nd(rng));
    }
    const Operator a(g, A), b(g, B);
    const Mat adA = Mat(adjoint_superop(a).entries), adB = Mat(adjoint_superop(b).entries);
    const Mat lhs = Mat(adjoint_superop(commutator(a, b)).entries);
    worst = std::max(worst, (lhs - (adA * adB - adB * adA)).cwiseAbs().maxCoeff());
  }
  std::ostringstream os;
  os << pairs << " pairs, max deviation " << worst;
  return {"lie homomorphism", worst < 1e-9, os.str()};
}

inline Verdict double_commutant() {
  Verdict v{"double commutant", true, ""};
  int checked = 0;
  for (const auto& e : catalog()) {
    const std::vector<int> sizes = e.local_dim == 3 ? std::vector<int>{2} : std::vector<int>{2, 3};
    for (int L : sizes) {
      const GateSet gs = build(e.name, L);
      const OperatorBasis bond = associative_closure(gs.dense_generators(), gs.geometry);
      const OperatorBasis comm = commutant(gs);
      std::vector<Mat> ce;
      for (Eigen::Index k = 0; k < comm.dim(); ++k) {
        const Mat E = comm.element(k);
        ce.push_back(E + E.adjoint());
        ce.push_back(cd(0, 1) * (E - E.adjoint()));
      }
      const OperatorBasis cc = to_basis(commutant_of(ce), gs.geometry, "double commutant");
      const bool ok = same_span(bond.full_vectors(), cc.full_vectors());
      ++checked;
      if (!ok) {
        v.ok = false;
        v.detail += e.name + " L=" + std::to_string(L) + " differs; ";
      }
    }
  }
  if (v.ok) v.detail = std::to_string(checked) + " cases equal";
  return v;
}

inline Verdict minimal_inside_actual() {
  Verdict v{"minimal super-commutant inside actual", true, ""};
  double worst = 0.0;
  for (const auto& c : catalog_cases()) {
    const AlgebraBundle b = analyze_algebras(build(c.name, c.L));
    const SuperAlgebra sc = super_commutant(b, Restriction::Bond), sct = minimal_super_commutant(b, Restriction::Bond);
    const double r = containment_residual(sct, sc);
    worst = std::max(worst, r);
    if (r > 1e-7 || sct.dim() > sc.dim()) {
      v.ok = false;
      v.detail += c.name + " residual " + std::to_string(r) + "; ";
    }
  }
  if (v.ok) v.detail = "all catalog sets, worst residual " + std::to_string(worst);
  return v;
}

// Sector projectors, traceless overlaps and center projections for one set.
struct SectorChecks {
  double projector_worst = 0.0;
  int sectors_checked = 0;
  int sectors_failed = 0;
  bool center_projection = true;
};

inline SectorChecks sector_checks(const std::string& name, int L) {
  SectorChecks s;
  const AlgebraBundle b = analyze_algebras(build(name, L));
  const auto projs = sector_projectors(b.center);
  s.projector_worst = check_projectors(projs, b.gates).worst();
  for (const auto& t : sector_traceless_check(b, projs)) {
    ++s.sectors_checked;
    if (!t.has_traceless) ++s.sectors_failed;
  }
  s.center_projection = center_projection_check(b.dla, b.center, b.gates).equal();
  return s;
}

inline std::vector<Verdict> sector_lemmas() {
  Verdict proj{"projector axioms", true, ""}, traceless{"traceless overlap per sector", true, ""},
      cproj{"center projection", true, ""};
  double worst = 0.0;
  int sectors = 0;
  for (const auto& c : catalog_cases()) {
    const SectorChecks s = sector_checks(c.name, c.L);
    worst = std::max(worst, s.projector_worst);
    sectors += s.sectors_checked;
    if (s.projector_worst > 1e-9) {
      proj.ok = false;
      proj.detail += c.name + "; ";
    }
    if (s.sectors_failed) {
      traceless.ok = false;
      traceless.detail += c.name + " (" + std::to_string(s.sectors_failed) + " sectors); ";
    }
    if (!s.center_projection) {
      cproj.ok = false;
      cproj.detail += c.name + "; ";
    }
  }
  if (proj.ok) proj.detail = "worst defect " + std::to_string(worst);
  if (traceless.ok) traceless.detail = std::to_string(sectors) + " sectors with D > 1";
  if (cproj.ok) cproj.detail = "all catalog sets";
  return {proj, traceless, cproj};
}

// The Majorana number superoperator commutes with the matchgate Liouvillians
// but is absent from the minimal super-commutant.
inline Verdict majorana_number_scar(int L = 3) {
  const AlgebraBundle b = analyze_algebras(build("mg_z2", L));
  const SuperAlgebra sc = super_commutant(b, Restriction::None), sct = minimal_super_commutant(b, Restriction::None);
  const Vec n = oracle::vec_rowmajor(Mat(majorana_number_superop(L).entries));
  const Mat Vs = sc.vectors(), Vm = sct.vectors();
  const double in_sc = (n - Vs * (Vs.adjoint() * n)).norm() / n.norm();
  const double out_min = (n - Vm * (Vm.adjoint() * n)).norm() / n.norm();
  std::ostringstream os;
  os << "residual in SC " << in_sc << ", outside minimal " << out_min;
  return {"Majorana number in SC only", in_sc < 1e-8 && out_min > 1e-3, os.str()};
}

inline Verdict generalized_product_identity() {
  const int L = 2;
  const Eigen::Index N = 1 << L;
  std::vector<Mat> g;
  for (int k = 1; k <= 2 * L; ++k) g.push_back(Mat(majorana_pauli(L, k).matrix()));
  Mat Q1 = Mat::Zero(N * N, N * N), Q2 = Mat::Zero(N * N, N * N);
  for (const auto& a : g) {
    const Vec v = oracle::vec_rowmajor(a) / std::sqrt(double(N));
    Q1 += v * v.adjoint();
  }
  for (const auto& a : g)
    for (const auto& c : g) Q2 += oracle::vec_rowmajor(a * c) * oracle::vec_rowmajor(c * a).adjoint();
  const double err = (generalized_product(Q1, Q1, N) - Q2 / double(N * N)).norm();
  return {"generalized product", err < 1e-12, "deviation " + std::to_string(err)};
}

inline std::vector<Verdict> all() {
  std::vector<Verdict> out{lie_homomorphism(), double_commutant(), minimal_inside_actual()};
  for (auto& v : sector_lemmas()) out.push_back(v);
  out.push_back(majorana_number_scar());
  out.push_back(generalized_product_identity());
  return out;
}

}  // namespace lemma
