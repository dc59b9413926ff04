#include "clab/operator_space.hpp"

#include <algorithm>
#include <numeric>

namespace clab {

const char* to_string(Boundary b) { return b == Boundary::Open ? "obc" : "pbc"; }

ChainGeometry ChainGeometry::qubits(int L, Boundary b) { return {L, std::vector<int>(L, 2), b}; }
ChainGeometry ChainGeometry::qutrits(int L, Boundary b) { return {L, std::vector<int>(L, 3), b}; }

Eigen::Index ChainGeometry::dim() const {
  Eigen::Index d = 1;
  for (int x : local_dims) d *= x;
  return d;
}

void ChainGeometry::validate(Eigen::Index max_dim) const {
  if (num_sites < 0 || static_cast<std::size_t>(num_sites) != local_dims.size())
    throw Error("geometry: num_sites does not match local_dims");
  for (int x : local_dims)
    if (x < 2) throw Error("geometry: local dimension must be >= 2");
  double d = 1;
  for (int x : local_dims) d *= x;
  if (d > static_cast<double>(max_dim))
    throw SizeLimitError("geometry: Hilbert space dimension " + std::to_string(static_cast<long long>(d)) +
                         " exceeds the limit " + std::to_string(max_dim));
}

Operator::Operator(ChainGeometry g, SpMat m, HermitianFlag f) : geom_(std::move(g)), m_(std::move(m)), flag_(f) {
  if (m_.rows() != geom_.dim() || m_.cols() != geom_.dim()) throw Error("operator: shape does not match geometry");
  m_.makeCompressed();
  if (f == HermitianFlag::Yes && hermiticity_defect() > tol::herm)
    throw Error("operator: flagged hermitian but deviates by " + std::to_string(hermiticity_defect()));
}

Operator::Operator(ChainGeometry g, const Mat& m, HermitianFlag f) : Operator(std::move(g), SpMat(m.sparseView()), f) {}

Operator Operator::identity(const ChainGeometry& g) {
  SpMat I(g.dim(), g.dim());
  I.setIdentity();
  return Operator(g, I, HermitianFlag::Yes);
}

Operator Operator::zero(const ChainGeometry& g) { return Operator(g, SpMat(g.dim(), g.dim()), HermitianFlag::Yes); }

double Operator::hermiticity_defect() const {
  SpMat d = m_ - SpMat(m_.adjoint());
  double worst = 0.0;
  for (int k = 0; k < d.outerSize(); ++k)
    for (SpMat::InnerIterator it(d, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

Operator Operator::adjoint() const { return Operator(geom_, SpMat(m_.adjoint()), flag_); }

namespace {
void require_same(const ChainGeometry& a, const ChainGeometry& b, const char* what) {
  if (!a.same_space(b)) throw Error(std::string(what) + ": geometry mismatch");
}
}  // namespace

Operator Operator::operator+(const Operator& o) const {
  require_same(geom_, o.geom_, "operator+");
  return Operator(geom_, SpMat(m_ + o.m_));
}
Operator Operator::operator-(const Operator& o) const {
  require_same(geom_, o.geom_, "operator-");
  return Operator(geom_, SpMat(m_ - o.m_));
}
Operator Operator::operator*(const Operator& o) const {
  require_same(geom_, o.geom_, "operator*");
  return Operator(geom_, SpMat(m_ * o.m_));
}
Operator Operator::operator*(cd s) const { return Operator(geom_, SpMat(m_ * s)); }

Operator embed_local(const Mat& op_local, const std::vector<int>& sites, const ChainGeometry& geom) {
  const int L = geom.num_sites;
  std::vector<Eigen::Index> stride(L + 1, 1);
  for (int s = L - 1; s >= 0; --s) stride[s] = stride[s + 1] * geom.local_dims[s];
  Eigen::Index ldim = 1;
  std::vector<int> seen;
  for (int s : sites) {
    if (s < 1 || s > L) throw Error("embed_local: site " + std::to_string(s) + " out of range");
    if (std::find(seen.begin(), seen.end(), s) != seen.end()) throw Error("embed_local: repeated site");
    seen.push_back(s);
    ldim *= geom.local_dims[s - 1];
  }
  if (op_local.rows() != ldim || op_local.cols() != ldim)
    throw Error("embed_local: local operator dimension does not match the sites");

  const int k = static_cast<int>(sites.size());
  std::vector<Eigen::Index> lstride(k + 1, 1);
  for (int t = k - 1; t >= 0; --t) lstride[t] = lstride[t + 1] * geom.local_dims[sites[t] - 1];

  const Eigen::Index dim = geom.dim();
  std::vector<Eigen::Triplet<cd>> trip;
  trip.reserve(static_cast<std::size_t>(dim));
  for (Eigen::Index c = 0; c < dim; ++c) {
    Eigen::Index lc = 0, base = c;
    for (int t = 0; t < k; ++t) {
      const int s = sites[t] - 1;
      const Eigen::Index digit = (c / stride[s + 1]) % geom.local_dims[s];
      lc += digit * lstride[t + 1];
      base -= digit * stride[s + 1];
    }
    for (Eigen::Index lr = 0; lr < ldim; ++lr) {
      const cd v = op_local(lr, lc);
      if (v == cd(0)) continue;
      Eigen::Index r = base;
      for (int t = 0; t < k; ++t) {
        const int s = sites[t] - 1;
        r += ((lr / lstride[t + 1]) % geom.local_dims[s]) * stride[s + 1];
      }
      trip.emplace_back(r, c, v);
    }
  }
  SpMat m(dim, dim);
  m.setFromTriplets(trip.begin(), trip.end());
  const bool herm = (op_local - op_local.adjoint()).cwiseAbs().maxCoeff() <= tol::herm;
  return Operator(geom, m, herm ? HermitianFlag::Yes : HermitianFlag::No);
}

cd hs_inner(const Operator& A, const Operator& B) {
  require_same(A.geometry(), B.geometry(), "hs_inner");
  return SpMat(A.matrix().conjugate().cwiseProduct(B.matrix())).sum();
}

Operator commutator(const Operator& A, const Operator& B) {
  require_same(A.geometry(), B.geometry(), "commutator");
  return Operator(A.geometry(), SpMat(A.matrix() * B.matrix() - B.matrix() * A.matrix()));
}

SuperOperator adjoint_superop(const Operator& K) {
  const Eigen::Index n = K.dim();
  std::vector<Eigen::Triplet<cd>> trip;
  const SpMat& k = K.matrix();
  // (K ⊗ 1)[(i,j),(m,j)] = K(i,m);  (1 ⊗ K^T)[(i,j),(i,l)] = K(l,j)
  for (int c = 0; c < k.outerSize(); ++c)
    for (SpMat::InnerIterator it(k, c); it; ++it) {
      const Eigen::Index r = it.row();
      for (Eigen::Index j = 0; j < n; ++j) {
        trip.emplace_back(r * n + j, c * n + j, it.value());
        trip.emplace_back(j * n + c, j * n + r, -it.value());
      }
    }
  SpMat S(n * n, n * n);
  S.setFromTriplets(trip.begin(), trip.end());
  S.prune(cd(0), 0.0);
  return {K.geometry(), S};
}

VectorizedOperator vectorize(const Operator& O) {
  const Eigen::Index n = O.dim();
  Vec v = Vec::Zero(n * n);
  const SpMat& m = O.matrix();
  for (int c = 0; c < m.outerSize(); ++c)
    for (SpMat::InnerIterator it(m, c); it; ++it) v(it.row() * n + c) = it.value();
  return {O.geometry(), v};
}

Operator devectorize(const VectorizedOperator& v) {
  const Eigen::Index n = v.geometry.dim();
  if (v.coefficients.size() != n * n) throw Error("devectorize: length does not match geometry");
  std::vector<Eigen::Triplet<cd>> trip;
  for (Eigen::Index p = 0; p < n * n; ++p)
    if (v.coefficients(p) != cd(0)) trip.emplace_back(p / n, p % n, v.coefficients(p));
  SpMat m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  return Operator(v.geometry, m);
}

SuperOperator partial_transpose_pattern(const SuperOperator& S, const std::array<int, 4>& perm) {
  std::array<int, 4> check = perm;
  std::sort(check.begin(), check.end());
  if (check != std::array<int, 4>{0, 1, 2, 3}) throw Error("partial_transpose_pattern: not a permutation of 0..3");
  const Eigen::Index d = S.geometry.dim();
  if (S.entries.rows() != d * d || S.entries.cols() != d * d)
    throw Error("partial_transpose_pattern: shape does not match geometry");
  std::vector<Eigen::Triplet<cd>> trip;
  for (int c = 0; c < S.entries.outerSize(); ++c)
    for (SpMat::InnerIterator it(S.entries, c); it; ++it) {
      const std::array<Eigen::Index, 4> idx = {it.row() / d, it.row() % d, c / d, c % d};
      std::array<Eigen::Index, 4> out{};
      for (int k = 0; k < 4; ++k) out[perm[k]] = idx[k];
      trip.emplace_back(out[0] * d + out[1], out[2] * d + out[3], it.value());
    }
  SpMat R(d * d, d * d);
  R.setFromTriplets(trip.begin(), trip.end());
  return {S.geometry, R};
}

namespace {

// Splits every basis index into (kept index, traced index).
void split_indices(const ChainGeometry& geom, const std::vector<int>& traced, std::vector<Eigen::Index>& keep_idx,
                   std::vector<Eigen::Index>& trace_idx, Eigen::Index& dk, Eigen::Index& dt) {
  const int L = geom.num_sites;
  std::vector<bool> is_traced(L, false);
  for (int s : traced) {
    if (s < 1 || s > L) throw Error("partial_trace: site " + std::to_string(s) + " out of range");
    is_traced[s - 1] = true;
  }
  dk = 1;
  dt = 1;
  for (int s = 0; s < L; ++s) (is_traced[s] ? dt : dk) *= geom.local_dims[s];
  const Eigen::Index dim = geom.dim();
  keep_idx.assign(dim, 0);
  trace_idx.assign(dim, 0);
  for (Eigen::Index i = 0; i < dim; ++i) {
    Eigen::Index rem = i, sk = 1, st = 1, ik = 0, it = 0;
    for (int s = L - 1; s >= 0; --s) {
      const int ld = geom.local_dims[s];
      const Eigen::Index digit = rem % ld;
      rem /= ld;
      if (is_traced[s]) {
        it += digit * st;
        st *= ld;
      } else {
        ik += digit * sk;
        sk *= ld;
      }
    }
    keep_idx[i] = ik;
    trace_idx[i] = it;
  }
}

}  // namespace

Mat partial_trace_dense(const Mat& rho, const ChainGeometry& geom, const std::vector<int>& traced_sites) {
  std::vector<Eigen::Index> ki, ti;
  Eigen::Index dk, dt;
  split_indices(geom, traced_sites, ki, ti, dk, dt);
  Mat out = Mat::Zero(dk, dk);
  const Eigen::Index dim = geom.dim();
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i)
      if (ti[i] == ti[j]) out(ki[i], ki[j]) += rho(i, j);
  return out;
}

Operator partial_trace(const Operator& rho, const std::vector<int>& traced_sites) {
  const ChainGeometry& g = rho.geometry();
  Mat out = partial_trace_dense(rho.dense(), g, traced_sites);
  ChainGeometry kept{0, {}, g.boundary};
  for (int s = 1; s <= g.num_sites; ++s)
    if (std::find(traced_sites.begin(), traced_sites.end(), s) == traced_sites.end()) {
      kept.num_sites++;
      kept.local_dims.push_back(g.local_dims[s - 1]);
    }
  return Operator(kept, out, rho.hermitian_flag());
}

double reduced_purity(const Vec& psi, const ChainGeometry& geom, const std::vector<int>& region) {
  if (region.empty() || static_cast<int>(region.size()) == geom.num_sites) {
    const double n = psi.squaredNorm();
    return n * n;
  }
  std::vector<int> sorted = region;
  std::sort(sorted.begin(), sorted.end());
  bool prefix = true;
  for (std::size_t k = 0; k < sorted.size(); ++k) prefix = prefix && sorted[k] == static_cast<int>(k) + 1;
  Mat M;
  if (prefix) {
    Eigen::Index dA = 1;
    for (int s : sorted) dA *= geom.local_dims[s - 1];
    const Eigen::Index dB = geom.dim() / dA;
    // psi index a * dB + b; the column-major map of (dB x dA) is M^T.
    M = Eigen::Map<const Mat>(psi.data(), dB, dA);
  } else {
    std::vector<int> complement;
    for (int s = 1; s <= geom.num_sites; ++s)
      if (!std::binary_search(sorted.begin(), sorted.end(), s)) complement.push_back(s);
    std::vector<Eigen::Index> ka, kb;
    Eigen::Index dA, dB;
    split_indices(geom, complement, ka, kb, dA, dB);
    M = Mat::Zero(dB, dA);
    for (Eigen::Index i = 0; i < psi.size(); ++i) M(kb[i], ka[i]) = psi(i);
  }
  // rho_A = M^T conj(M); both Gram matrices share the nonzero spectrum.
  Mat G = (M.rows() <= M.cols()) ? Mat(M * M.adjoint()) : Mat(M.adjoint() * M);
  return G.squaredNorm();
}

Mat pauli(char c) {
  Mat m = Mat::Zero(2, 2);
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cd(0, -1), cd(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw Error(std::string("pauli: unknown label ") + c);
  }
  return m;
}

Mat spin(char c) { return 0.5 * pauli(c); }

}  // namespace clab
