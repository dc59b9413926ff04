#include "clab/majorana.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

namespace clab {

namespace {

struct LocalProduct {
  std::uint8_t op;
  int phase;
};

// Single-site Pauli products sigma_a sigma_b = i^phase sigma_c.
constexpr LocalProduct kTable[4][4] = {
    {{0, 0}, {1, 0}, {2, 0}, {3, 0}},
    {{1, 0}, {0, 0}, {3, 1}, {2, 3}},
    {{2, 0}, {3, 3}, {0, 0}, {1, 1}},
    {{3, 0}, {2, 1}, {1, 3}, {0, 0}},
};

const cd kIPow[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

}  // namespace

PauliString PauliString::identity(int L) {
  PauliString p;
  p.ops.assign(L, 0);
  return p;
}

PauliString PauliString::from_index(int L, std::uint64_t index) {
  PauliString p = identity(L);
  for (int s = L - 1; s >= 0; --s) {
    p.ops[s] = static_cast<std::uint8_t>(index & 3u);
    index >>= 2;
  }
  return p;
}

PauliString PauliString::parse(const std::string& label) {
  PauliString p;
  for (char c : label) {
    switch (c) {
      case 'I': p.ops.push_back(0); break;
      case 'X': p.ops.push_back(1); break;
      case 'Y': p.ops.push_back(2); break;
      case 'Z': p.ops.push_back(3); break;
      default: throw Error(std::string("PauliString: bad label character '") + c + "'");
    }
  }
  return p;
}

int PauliString::weight() const {
  return static_cast<int>(std::count_if(ops.begin(), ops.end(), [](std::uint8_t o) { return o != 0; }));
}

std::string PauliString::label() const {
  static const char names[] = {'I', 'X', 'Y', 'Z'};
  std::string s;
  for (auto o : ops) s += names[o];
  return s;
}

std::uint64_t PauliString::index() const {
  std::uint64_t idx = 0;
  for (auto o : ops) idx = (idx << 2) | o;
  return idx;
}

bool PauliString::commutes_with(const PauliString& o) const {
  if (o.size() != size()) throw Error("PauliString: length mismatch");
  int anti = 0;
  for (int s = 0; s < size(); ++s)
    if (ops[s] && o.ops[s] && ops[s] != o.ops[s]) ++anti;
  return anti % 2 == 0;
}

PauliString PauliString::operator*(const PauliString& o) const {
  if (o.size() != size()) throw Error("PauliString: length mismatch");
  PauliString r;
  r.ops.resize(ops.size());
  int ph = phase + o.phase;
  for (int s = 0; s < size(); ++s) {
    const LocalProduct& lp = kTable[ops[s]][o.ops[s]];
    r.ops[s] = lp.op;
    ph += lp.phase;
  }
  r.phase = ((ph % 4) + 4) % 4;
  return r;
}

cd PauliString::coefficient() const { return kIPow[((phase % 4) + 4) % 4]; }

SpMat PauliString::matrix() const {
  const int L = size();
  const Eigen::Index N = Eigen::Index(1) << L;
  std::uint64_t flip = 0;
  for (int s = 0; s < L; ++s)
    if (ops[s] == 1 || ops[s] == 2) flip |= std::uint64_t(1) << (L - 1 - s);
  std::vector<Eigen::Triplet<cd>> trip;
  trip.reserve(N);
  for (Eigen::Index r = 0; r < N; ++r) {
    cd v = coefficient();
    for (int s = 0; s < L; ++s) {
      const int bit = (r >> (L - 1 - s)) & 1;
      if (ops[s] == 2) v *= bit ? cd(0, 1) : cd(0, -1);
      if (ops[s] == 3 && bit) v = -v;
    }
    trip.emplace_back(r, static_cast<Eigen::Index>(r ^ flip), v);
  }
  SpMat M(N, N);
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

Operator PauliString::op() const { return Operator(ChainGeometry::qubits(size()), matrix()); }

PauliString majorana_pauli(int L, int k) {
  if (k < 1 || k > 2 * L) throw Error("majorana index " + std::to_string(k) + " outside 1.." + std::to_string(2 * L));
  const int j = (k + 1) / 2;
  PauliString p = PauliString::identity(L);
  for (int s = 0; s < j - 1; ++s) p.ops[s] = 3;
  p.ops[j - 1] = (k % 2 == 1) ? 1 : 2;
  return p;
}

Operator jordan_wigner(const ChainGeometry& geom, int j, MajoranaKind kind) {
  const int L = geom.num_sites;
  for (int d : geom.local_dims)
    if (d != 2) throw Error("jordan_wigner: qubit chain required");
  if (j < 1 || j > L) throw Error("jordan_wigner: site " + std::to_string(j) + " outside 1.." + std::to_string(L));
  const int k = kind == MajoranaKind::Odd ? 2 * j - 1 : 2 * j;
  return Operator(geom, majorana_pauli(L, k).matrix(), HermitianFlag::Yes);
}

double anticommutation_defect(int L) {
  const Eigen::Index N = Eigen::Index(1) << L;
  std::vector<SpMat> g;
  for (int k = 1; k <= 2 * L; ++k) g.push_back(majorana_pauli(L, k).matrix());
  SpMat I(N, N);
  I.setIdentity();
  double worst = 0.0;
  for (int a = 0; a < 2 * L; ++a)
    for (int b = a; b < 2 * L; ++b) {
      SpMat ac = g[a] * g[b] + g[b] * g[a];
      if (a == b) ac -= 2.0 * I;
      worst = std::max(worst, ac.norm());
    }
  return worst;
}

int MajoranaString::length() const { return static_cast<int>(std::count(occupation.begin(), occupation.end(), true)); }

PauliString MajoranaString::realize() const {
  if (occupation.size() % 2) throw Error("MajoranaString: occupation length must be even");
  const int L = static_cast<int>(occupation.size() / 2);
  PauliString p = PauliString::identity(L);
  p.phase = phase;
  for (int k = 1; k <= 2 * L; ++k)
    if (occupation[k - 1]) p = p * majorana_pauli(L, k);
  return p;
}

MajoranaTable majorana_table(int L) {
  if (L < 1 || L > 12) throw Error("majorana_table: L outside 1..12");
  const std::uint64_t count = std::uint64_t(1) << (2 * L);
  MajoranaTable t;
  t.L = L;
  t.length.assign(count, -1);
  t.mask.assign(count, 0);
  t.phase.assign(count, 0);
  std::vector<PauliString> gam;
  for (int k = 1; k <= 2 * L; ++k) gam.push_back(majorana_pauli(L, k));
  for (std::uint64_t m = 0; m < count; ++m) {
    PauliString p = PauliString::identity(L);
    for (int k = 0; k < 2 * L; ++k)
      if (m >> k & 1u) p = p * gam[k];
    const std::uint64_t idx = p.index();
    if (t.length[idx] >= 0) throw Error("majorana_table: two strings map to the same Pauli string");
    t.length[idx] = std::popcount(m);
    t.mask[idx] = static_cast<std::uint32_t>(m);
    // p = i^phase sigma_idx, so sigma_idx = i^{-phase} gamma^m.
    t.phase[idx] = (4 - p.phase) % 4;
  }
  return t;
}

SuperOperator majorana_number_superop(int L, int max_L) {
  if (L > max_L) throw SizeLimitError("majorana_number_superop: L = " + std::to_string(L) + " above " + std::to_string(max_L));
  const MajoranaTable t = majorana_table(L);
  const Eigen::Index N = Eigen::Index(1) << L;
  const double inv = 1.0 / static_cast<double>(N);
  std::vector<Eigen::Triplet<cd>> trip;
  for (std::uint64_t idx = 0; idx < t.length.size(); ++idx) {
    const int n = t.length[idx];
    if (n == 0) continue;
    const SpMat s = PauliString::from_index(L, idx).matrix();
    std::vector<std::pair<Eigen::Index, cd>> nz;
    for (int c = 0; c < s.outerSize(); ++c)
      for (SpMat::InnerIterator it(s, c); it; ++it) nz.emplace_back(it.row() * N + it.col(), it.value());
    for (const auto& [p, vp] : nz)
      for (const auto& [q, vq] : nz) trip.emplace_back(p, q, n * inv * vp * std::conj(vq));
  }
  SuperOperator out;
  out.geometry = ChainGeometry::qubits(L);
  out.entries.resize(N * N, N * N);
  out.entries.setFromTriplets(trip.begin(), trip.end());
  out.entries.prune(cd(0), 1e-14);
  return out;
}

FramedSuperBasis analytic_mg_scomm(int L) {
  if (L < 1 || L > 8) throw SizeLimitError("analytic_mg_scomm: L outside 1..8");
  const MajoranaTable t = majorana_table(L);
  const std::uint64_t count = t.length.size();
  const double norm = 1.0 / std::sqrt(static_cast<double>(std::uint64_t(1) << L));
  FramedSuperBasis out;
  out.geometry = ChainGeometry::qubits(L);
  out.label = "analytic matchgate super-commutant";
  out.frame.reserve(count);
  for (std::uint64_t idx = 0; idx < count; ++idx) out.frame.push_back(PauliString::from_index(L, idx).matrix() * norm);

  PauliString parity = PauliString::identity(L);
  for (auto& o : parity.ops) o = 3;
  const Eigen::Index n = static_cast<Eigen::Index>(count);
  for (int len = 0; len <= 2 * L; ++len) {
    const double w = 1.0 / std::sqrt(binom(2 * L, len));
    std::vector<Eigen::Triplet<cd>> diag, left;
    for (std::uint64_t b = 0; b < count; ++b) {
      if (t.length[b] != len) continue;
      diag.emplace_back(b, b, w);
      PauliString pb = parity * PauliString::from_index(L, b);
      left.emplace_back(static_cast<Eigen::Index>(pb.index()), b, w * pb.coefficient());
    }
    SpMat D(n, n), P(n, n);
    D.setFromTriplets(diag.begin(), diag.end());
    P.setFromTriplets(left.begin(), left.end());
    out.q.push_back(D);
    out.q.push_back(P);
  }
  return out;
}

Mat generalized_product(const Mat& Qa, const Mat& Qb, Eigen::Index n) {
  if (Qa.rows() != n * n || Qb.rows() != n * n) throw Error("generalized_product: size mismatch");
  auto to_bar = [n](const Mat& Q) {
    Mat B(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k)
          for (Eigen::Index l = 0; l < n; ++l) B(i * n + l, j * n + k) = Q(i * n + j, k * n + l);
    return B;
  };
  const Mat P = to_bar(Qa) * to_bar(Qb);
  Mat out(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l) out(i * n + j, k * n + l) = P(i * n + l, j * n + k);
  return out;
}

bool MgBlockSignature::operator<(const MgBlockSignature& o) const {
  return std::tie(D, d, lengths) < std::tie(o.D, o.d, o.lengths);
}
bool MgBlockSignature::operator==(const MgBlockSignature& o) const {
  return D == o.D && d == o.d && lengths == o.lengths;
}
std::string MgBlockSignature::str() const {
  std::ostringstream os;
  os << "(D=" << D << ",d=" << d << ",len={";
  for (std::size_t i = 0; i < lengths.size(); ++i) os << (i ? "," : "") << lengths[i];
  os << "})";
  return os.str();
}

MgDecompositionCheck verify_mg_decomposition(int L, Boundary bc) {
  if (L < 2) throw Error("verify_mg_decomposition: L >= 2 required");
  MgDecompositionCheck out;
  const GateSet gates = build("mg_z2", L, bc);
  const AlgebraBundle b = analyze_algebras(gates);
  const BlockDecomposition dec = block_decomposition(b, Restriction::None);
  const MajoranaTable t = majorana_table(L);
  const Eigen::Index N = Eigen::Index(1) << L;
  const double norm = 1.0 / std::sqrt(static_cast<double>(N));

  std::vector<SpMat> strings;
  for (std::uint64_t idx = 0; idx < t.length.size(); ++idx) strings.push_back(PauliString::from_index(L, idx).matrix());
  for (const auto& blk : dec.blocks) {
    std::vector<double> w(2 * L + 1, 0.0);
    for (std::uint64_t idx = 0; idx < strings.size(); ++idx) {
      Eigen::RowVectorXcd acc = Eigen::RowVectorXcd::Zero(blk.coords.cols());
      for (int c = 0; c < strings[idx].outerSize(); ++c)
        for (SpMat::InnerIterator it(strings[idx], c); it; ++it)
          acc += it.value() * norm * blk.coords.row(it.row() * N + it.col()).conjugate();
      w[t.length[idx]] += acc.squaredNorm();
    }
    MgBlockSignature s{blk.krylov_dim, blk.degeneracy, {}};
    for (int n = 0; n <= 2 * L; ++n)
      if (w[n] > 1e-6) s.lengths.push_back(n);
    out.actual.push_back(s);
  }
  std::sort(out.actual.begin(), out.actual.end());

  const int C = static_cast<int>(binom(2 * L, L));
  if (bc == Boundary::Open) {
    for (int n = 0; n < L; ++n) out.expected.push_back({static_cast<int>(binom(2 * L, n)), 2, {n, 2 * L - n}});
    out.expected.push_back({C / 2, 1, {L}});
    out.expected.push_back({C / 2, 1, {L}});
  } else {
    out.expected.push_back({1, 2, {0, 2 * L}});
    for (int n = 2; n < L; n += 2)
      for (int r = 0; r < 2; ++r) out.expected.push_back({static_cast<int>(binom(2 * L, n)), 1, {n, 2 * L - n}});
  }
  std::sort(out.expected.begin(), out.expected.end());

  if (bc == Boundary::Open) {
    if (out.actual != out.expected) {
      out.ok = false;
      for (const auto& e : out.expected)
        if (std::count(out.actual.begin(), out.actual.end(), e) != std::count(out.expected.begin(), out.expected.end(), e))
          out.mismatches.push_back("expected block " + e.str() + " not matched");
      for (const auto& a : out.actual)
        if (std::count(out.expected.begin(), out.expected.end(), a) == 0)
          out.mismatches.push_back("unexpected block " + a.str());
    }
  } else {
    for (const auto& e : out.expected) {
      const auto need = std::count(out.expected.begin(), out.expected.end(), e);
      if (std::count(out.actual.begin(), out.actual.end(), e) < need) {
        out.ok = false;
        out.mismatches.push_back("expected block " + e.str() + " not found");
      }
    }
  }

  if (L <= 4) {
    const SuperOperator num = majorana_number_superop(L);
    double worst = 0.0;
    for (const auto& g : gates.generators) {
      const SpMat ad = adjoint_superop(g.op).entries;
      worst = std::max(worst, SpMat(num.entries * ad - ad * num.entries).norm());
    }
    out.number_conserved = worst < 1e-9;
  }
  if (!dec.consistent()) {
    out.ok = false;
    out.mismatches.push_back("Krylov probes disagree with the block dimensions");
  }
  return out;
}

double predicted_otoc_mg(int L) {
  if (L < 2) throw Error("predicted_otoc_mg: L >= 2 required");
  const double l = L;
  return 1.0 - 8.0 * (l - 1.0) / (2.0 * l * l - l);
}

double predicted_purity(int L, int ell, PurityKind kind) {
  if (ell < 0 || ell > L) throw Error("predicted_purity: subsystem size outside 0..L");
  if (kind == PurityKind::Universal) {
    // Equal to [(2^l - 2^-l) + (2^{L-l} - 2^{l-L})] / (2^L - 2^-L).
    return (std::ldexp(1.0, ell) + std::ldexp(1.0, L - ell)) / (std::ldexp(1.0, L) + 1.0);
  }
  double sum = 0.0;
  for (int k = 0; k <= L; ++k) sum += binom(L, k) * binom(2 * (L - ell), 2 * k) / binom(2 * L, 2 * k);
  return std::ldexp(sum, -(L - ell));
}

}  // namespace clab
