#include "clab/gate_catalog.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <map>

namespace clab {

std::vector<Mat> GateSet::dense_generators() const {
  std::vector<Mat> out;
  for (const auto& g : generators) out.push_back(g.op.dense());
  return out;
}

std::vector<Operator> GateSet::operators() const {
  std::vector<Operator> out;
  for (const auto& g : generators) out.push_back(g.op);
  return out;
}

std::vector<Mat> GateSet::dense_nontrivial() const {
  std::vector<Mat> out;
  for (const auto& g : generators)
    if (!g.is_identity) out.push_back(g.op.dense());
  return out;
}

Mat tjz_z() {
  Mat z = Mat::Zero(3, 3);
  z(0, 0) = 1;
  z(2, 2) = -1;
  return z;
}

Mat tjz_hop() {
  // |up 0><0 up| + |down 0><0 down| + h.c. on a 9-dim two-site space (index = 3a + b)
  Mat t = Mat::Zero(9, 9);
  auto idx = [](int a, int b) { return 3 * a + b; };
  const int up = 0, zero = 1, dn = 2;
  t(idx(up, zero), idx(zero, up)) = 1;
  t(idx(dn, zero), idx(zero, dn)) = 1;
  t += t.adjoint().eval();
  return t;
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"u1", Boundary::Periodic, "3L", "XX+YY, ZZ on bonds and Z on sites (U(1) symmetric)", 2},
      {"su2", Boundary::Periodic, "L (k=2)", "Heisenberg exchange S.S on bonds; k=3 adds next-neighbour and chiral terms", 2},
      {"tjz", Boundary::Open, "4L-2", "t-J_z hopping T, Z Z on bonds and Z, Z^2 on sites (qutrits)", 3},
      {"tjz_mg", Boundary::Open, "3L-2", "t-J_z hopping, Z^2 Z^2 - Z Z on bonds and Z^2 on sites (qutrits)", 3},
      {"translation", Boundary::Periodic, "12", "translation invariant sums of S^a and S^a S^b", 2},
      {"mg_z2", Boundary::Open, "2L-1 (obc), 2L (pbc)", "matchgates X X on bonds and Z on sites", 2},
      {"mg_u1", Boundary::Open, "2L-1", "number conserving matchgates XX+YY on bonds and Z on sites", 2},
      {"xz_decoupled", Boundary::Open, "2L", "on-site X and Z only", 2},
      {"z2", Boundary::Periodic, "3L+1", "identity, Z, X X and Z Z (parity symmetric)", 2},
      {"universal", Boundary::Open, "4L-1 (obc)", "identity, X, Z, X X and Z Z", 2},
  };
  return entries;
}

const CatalogEntry& catalog_entry(const std::string& name) {
  for (const auto& e : catalog())
    if (e.name == name) return e;
  throw Error("unknown gate set '" + name + "'");
}

namespace {

Mat pauli_string_matrix(const std::string& s) {
  Mat m = Mat::Identity(1, 1);
  for (char c : s) m = Eigen::kroneckerProduct(m, pauli(c)).eval();
  return m;
}

struct Builder {
  GateSet gs;

  bool duplicate(const Operator& op) const {
    for (const auto& g : gs.generators) {
      if ((g.op.matrix() - op.matrix()).norm() <= 1e-12 * (1 + op.norm())) return true;
      if ((g.op.matrix() + op.matrix()).norm() <= 1e-12 * (1 + op.norm())) return true;
    }
    return false;
  }

  void add(const std::string& label, std::vector<LocalTerm> terms, bool commute = true) {
    Operator op = Operator::zero(gs.geometry);
    for (auto& t : terms) {
      if (t.matrix.size() == 0) t.matrix = t.coeff * pauli_string_matrix(t.pauli);
      op = op + embed_local(t.matrix, t.sites, gs.geometry);
    }
    op = Operator(gs.geometry, op.matrix(), HermitianFlag::Yes);
    if (op.norm() == 0.0 || duplicate(op)) return;
    gs.generators.push_back({label, op, std::move(terms), commute, false});
  }

  void add_pauli(const std::string& label, const std::vector<std::pair<std::string, double>>& strings,
                 const std::vector<int>& sites, bool commute = true) {
    std::vector<LocalTerm> terms;
    for (const auto& [s, c] : strings) terms.push_back({sites, Mat(), s, c});
    add(label, std::move(terms), commute);
  }

  void add_identity() {
    gs.generators.push_back({"1", Operator::identity(gs.geometry), {}, true, true});
    gs.include_identity = true;
  }
};

std::string site_label(const std::string& what, std::initializer_list<int> sites) {
  std::string s = what + "_";
  bool first = true;
  for (int x : sites) {
    if (!first) s += ",";
    s += std::to_string(x);
    first = false;
  }
  return s;
}

std::vector<std::pair<int, int>> bonds(int L, Boundary b) {
  std::vector<std::pair<int, int>> out;
  for (int j = 1; j < L; ++j) out.emplace_back(j, j + 1);
  if (b == Boundary::Periodic) out.emplace_back(L, 1);
  return out;
}

void build_su2(Builder& B, int L, Boundary bc, int k) {
  auto exchange = [&](int a, int b) {
    B.add_pauli(site_label("S.S", {a, b}), {{"XX", 0.25}, {"YY", 0.25}, {"ZZ", 0.25}}, {a, b});
  };
  if (k == 2) {
    for (auto [a, b] : bonds(L, bc)) exchange(a, b);
    return;
  }
  const int last = bc == Boundary::Periodic ? L : L - 2;
  auto wrap = [L](int s) { return (s - 1) % L + 1; };
  for (int j = 1; j <= last; ++j) {
    const int a = j, b = wrap(j + 1), c = wrap(j + 2);
    exchange(a, b);
    exchange(a, c);
    // S_a . (S_b x S_c) = sum eps_ijk S^i_a S^j_b S^k_c
    std::vector<std::pair<std::string, double>> chiral = {{"XYZ", 0.125}, {"YZX", 0.125}, {"ZXY", 0.125},
                                                          {"XZY", -0.125}, {"ZYX", -0.125}, {"YXZ", -0.125}};
    B.add_pauli(site_label("S.(SxS)", {a, b, c}), chiral, {a, b, c}, false);
  }
  if (bc == Boundary::Open && L >= 2) exchange(L - 1, L);
}

}  // namespace

GateSet build(const std::string& name, int L, std::optional<Boundary> boundary, std::optional<int> k) {
  const CatalogEntry& entry = catalog_entry(name);
  if (L < 2) throw Error("gate set '" + name + "' needs L >= 2");
  const int kk = k.value_or(2);
  if (name == "su2") {
    if (kk != 2 && kk != 3) throw Error("su2 supports k = 2 or k = 3");
    if (kk == 3 && L < 3) throw Error("su2 with k = 3 needs L >= 3");
  } else if (kk != 2) {
    throw Error("gate set '" + name + "' only supports k = 2");
  }
  const Boundary bc = boundary.value_or(entry.default_boundary);
  Builder B;
  B.gs.name = name;
  B.gs.locality = kk;
  B.gs.geometry = entry.local_dim == 3 ? ChainGeometry::qutrits(L, bc) : ChainGeometry::qubits(L, bc);
  const auto bl = bonds(L, bc);

  if (name == "u1") {
    for (int j = 1; j <= L; ++j) {
      if (j <= static_cast<int>(bl.size())) {
        auto [a, b] = bl[j - 1];
        B.add_pauli(site_label("XX+YY", {a, b}), {{"XX", 1.0}, {"YY", 1.0}}, {a, b});
        B.add_pauli(site_label("ZZ", {a, b}), {{"ZZ", 1.0}}, {a, b});
      }
      B.add_pauli(site_label("Z", {j}), {{"Z", 1.0}}, {j});
    }
  } else if (name == "su2") {
    build_su2(B, L, bc, kk);
  } else if (name == "tjz" || name == "tjz_mg") {
    const Mat z = tjz_z();
    const Mat z2 = z * z;
    const Mat zz = Eigen::kroneckerProduct(z, z).eval();
    const Mat z2z2 = Eigen::kroneckerProduct(z2, z2).eval();
    for (auto [a, b] : bl) {
      B.add(site_label("T", {a, b}), {{{a, b}, tjz_hop(), "", 1.0}});
      if (name == "tjz")
        B.add(site_label("ZZ", {a, b}), {{{a, b}, zz, "", 1.0}});
      else
        B.add(site_label("Z2Z2-ZZ", {a, b}), {{{a, b}, Mat(z2z2 - zz), "", 1.0}});
    }
    for (int j = 1; j <= L; ++j) {
      if (name == "tjz") B.add(site_label("Z", {j}), {{{j}, z, "", 1.0}});
      B.add(site_label("Z2", {j}), {{{j}, z2, "", 1.0}});
    }
  } else if (name == "translation") {
    const std::string ab = "XYZ";
    for (char a : ab) {
      std::vector<LocalTerm> terms;
      for (int j = 1; j <= L; ++j) terms.push_back({{j}, Mat(), std::string(1, a), 0.5});
      B.add(std::string("sum S") + a, std::move(terms));
    }
    for (char a : ab)
      for (char b : ab) {
        std::vector<LocalTerm> terms;
        for (auto [x, y] : bonds(L, Boundary::Periodic)) terms.push_back({{x, y}, Mat(), std::string{a, b}, 0.25});
        B.add(std::string("sum S") + a + "S" + b, std::move(terms), a == b);
      }
  } else if (name == "mg_z2") {
    for (int j = 1; j <= L; ++j) {
      B.add_pauli(site_label("Z", {j}), {{"Z", 1.0}}, {j});
      if (j < L) B.add_pauli(site_label("XX", {j, j + 1}), {{"XX", 1.0}}, {j, j + 1});
    }
    if (bc == Boundary::Periodic) B.add_pauli(site_label("XX", {L, 1}), {{"XX", 1.0}}, {L, 1});
  } else if (name == "mg_u1") {
    for (int j = 1; j <= L; ++j) {
      B.add_pauli(site_label("Z", {j}), {{"Z", 1.0}}, {j});
      if (j < L) B.add_pauli(site_label("XX+YY", {j, j + 1}), {{"XX", 1.0}, {"YY", 1.0}}, {j, j + 1});
    }
    if (bc == Boundary::Periodic) B.add_pauli(site_label("XX+YY", {L, 1}), {{"XX", 1.0}, {"YY", 1.0}}, {L, 1});
  } else if (name == "xz_decoupled") {
    for (int j = 1; j <= L; ++j) {
      B.add_pauli(site_label("X", {j}), {{"X", 1.0}}, {j});
      B.add_pauli(site_label("Z", {j}), {{"Z", 1.0}}, {j});
    }
  } else if (name == "z2" || name == "universal") {
    B.add_identity();
    for (int j = 1; j <= L; ++j) {
      if (name == "universal") B.add_pauli(site_label("X", {j}), {{"X", 1.0}}, {j});
      B.add_pauli(site_label("Z", {j}), {{"Z", 1.0}}, {j});
    }
    for (auto [a, b] : bl) {
      B.add_pauli(site_label("XX", {a, b}), {{"XX", 1.0}}, {a, b});
      B.add_pauli(site_label("ZZ", {a, b}), {{"ZZ", 1.0}}, {a, b});
    }
  }
  return B.gs;
}

GateSet custom(const std::vector<Operator>& ops, const std::string& name) {
  if (ops.empty()) throw Error("custom gate set: no generators");
  GateSet gs;
  gs.name = name;
  gs.geometry = ops.front().geometry();
  int idx = 0;
  for (const auto& op : ops) {
    if (!op.geometry().same_space(gs.geometry)) throw Error("custom gate set: geometry mismatch");
    const double dev = op.hermiticity_defect();
    if (dev > tol::herm)
      throw Error("custom gate set: generator " + std::to_string(idx) + " is not hermitian (max deviation " +
                  std::to_string(dev) + ")");
    Generator g;
    g.label = "h" + std::to_string(idx++);
    g.op = Operator(gs.geometry, op.matrix(), HermitianFlag::Yes);
    const Mat d = g.op.dense();
    g.is_identity = (d - d(0, 0) * Mat::Identity(d.rows(), d.cols())).norm() <= 1e-12 && d(0, 0) != cd(0);
    gs.include_identity = gs.include_identity || g.is_identity;
    gs.generators.push_back(std::move(g));
  }
  return gs;
}

GateSet with_identity(const GateSet& g) {
  if (g.include_identity) return g;
  GateSet out = g;
  out.generators.push_back({"1", Operator::identity(g.geometry), {}, true, true});
  out.include_identity = true;
  return out;
}

}  // namespace clab
