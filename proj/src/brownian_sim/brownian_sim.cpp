#include "clab/brownian_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace clab {

namespace {

// Sum of local term norms; the Frobenius norm when no terms are recorded.
double norm_bound(const Generator& g) {
  if (g.terms.empty()) return g.op.norm();
  double b = 0.0;
  for (const auto& t : g.terms) b += t.matrix.size() ? t.matrix.operatorNorm() : std::abs(t.coeff);
  return b;
}

}  // namespace

std::string to_string(DynamicsMode m) { return m == DynamicsMode::Brownian ? "brownian" : "floquet"; }

void TrajectoryConfig::validate() const {
  if (gates.generators.empty()) throw Error("trajectory config: empty gate set");
  if (!(kappa > 0.0)) throw Error("trajectory config: kappa must be positive");
  if (!(dt > 0.0)) throw Error("trajectory config: dt must be positive");
  if (!(t_max >= 0.0)) throw Error("trajectory config: t_max must be non-negative");
  if (ensemble_size < 1) throw Error("trajectory config: ensemble_size must be at least 1");
  if (sample_every < 1) throw Error("trajectory config: sample_every must be at least 1");
  if (floquet_depth < 0) throw Error("trajectory config: negative Floquet depth");
  if (!(angle_stddev >= 0.0)) throw Error("trajectory config: negative angle spread");
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) throw Error("trajectory config: window fraction outside (0, 1]");
}

std::vector<std::string> TrajectoryConfig::warnings() const {
  std::vector<std::string> out;
  if (mode == DynamicsMode::Brownian) {
    double worst = 0.0;
    for (const auto& g : gates.generators)
      if (!g.is_identity) worst = std::max(worst, norm_bound(g));
    const double typical = std::sqrt(2.0 * kappa * dt) * worst;
    if (typical > 0.3)
      out.push_back("per-step rotation sqrt(2 kappa dt) * |h| = " + std::to_string(typical) +
                    " is large; Trotter error may be visible");
  }
  return out;
}

int TrajectoryConfig::num_steps() const {
  if (mode == DynamicsMode::Floquet) return static_cast<int>(std::llround(t_max));
  return static_cast<int>(std::llround(t_max / dt));
}

Propagator::Propagator(const GateSet& gates, Eigen::Index dense_limit) {
  N_ = gates.geometry.dim();
  bool qubits = std::all_of(gates.geometry.local_dims.begin(), gates.geometry.local_dims.end(),
                            [](int d) { return d == 2; });
  for (const auto& g : gates.generators) {
    if (g.is_identity) continue;
    Kernel k;
    bool pauli = qubits && g.terms_commute && !g.terms.empty();
    for (const auto& t : g.terms) pauli = pauli && !t.pauli.empty() && t.pauli.size() == t.sites.size();
    if (pauli) {
      for (const auto& t : g.terms) {
        PauliString p = PauliString::identity(gates.geometry.num_sites);
        const PauliString local = PauliString::parse(t.pauli);
        for (std::size_t s = 0; s < t.sites.size(); ++s) p.ops[t.sites[s] - 1] = local.ops[s];
        const SpMat m = p.matrix();
        PauliTerm pt;
        pt.perm.resize(N_);
        pt.val.resize(N_);
        pt.coeff = t.coeff;
        pt.diagonal = true;
        for (int c = 0; c < m.outerSize(); ++c)
          for (SpMat::InnerIterator it(m, c); it; ++it) {
            pt.perm[it.row()] = static_cast<std::uint32_t>(c);
            pt.val[it.row()] = it.value();
            if (it.row() != c) pt.diagonal = false;
          }
        pt.val_partner.resize(N_);
        for (Eigen::Index r = 0; r < N_; ++r) pt.val_partner[r] = pt.val[pt.perm[r]];
        k.paulis.push_back(std::move(pt));
      }
    } else {
      if (N_ > dense_limit)
        throw SizeLimitError("propagator: generator " + g.label + " needs a dense exponential at dimension " +
                             std::to_string(N_));
      Eigen::SelfAdjointEigenSolver<Mat> es(Mat(g.op.matrix()));
      k.V = es.eigenvectors();
      k.e = es.eigenvalues();
      k.dense = true;
    }
    max_norm_ = std::max(max_norm_, k.dense ? k.e.cwiseAbs().maxCoeff() : norm_bound(g));
    gens_.push_back(std::move(k));
  }
}

void Propagator::apply_kernel(const Kernel& k, double theta, Vec& psi) const {
  if (k.dense) {
    Vec y = k.V.adjoint() * psi;
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] *= std::polar(1.0, -theta * k.e[i]);
    psi = k.V * y;
    return;
  }
  Vec old;
  for (const auto& p : k.paulis) {
    const double c = std::cos(theta * p.coeff), s = std::sin(theta * p.coeff);
    const cd mis(0.0, -s);
    if (p.diagonal) {
      for (Eigen::Index r = 0; r < N_; ++r) psi[r] *= c + mis * p.val[r];
      continue;
    }
    old = psi;
    for (Eigen::Index r = 0; r < N_; ++r) psi[r] = c * old[r] + mis * p.val[r] * old[p.perm[r]];
  }
}

void Propagator::conjugate_kernel(const Kernel& k, double theta, Mat& A) const {
  if (k.dense) {
    Mat U = k.V;
    for (Eigen::Index i = 0; i < U.cols(); ++i) U.col(i) *= std::polar(1.0, -theta * k.e[i]);
    U = U * k.V.adjoint();
    A = U.adjoint() * A * U;
    return;
  }
  Mat old;
  for (const auto& p : k.paulis) {
    const double c = std::cos(theta * p.coeff), s = std::sin(theta * p.coeff);
    if (p.diagonal) {
      Vec d(N_);
      for (Eigen::Index r = 0; r < N_; ++r) d[r] = cd(c, 0.0) - cd(0.0, s) * p.val[r];
      for (Eigen::Index col = 0; col < N_; ++col)
        for (Eigen::Index r = 0; r < N_; ++r) A(r, col) *= std::conj(d[r]) * d[col];
      continue;
    }
    // e = c - i s P with P[r, perm r] = val[r]; perm is an involution.
    old = A;
    const cd cc(c * c, 0.0), ss(s * s, 0.0), ics(0.0, c * s);
    for (Eigen::Index col = 0; col < N_; ++col) {
      const Eigen::Index pc = p.perm[col];
      const cd vk = p.val_partner[col];
      for (Eigen::Index r = 0; r < N_; ++r) {
        const Eigen::Index pr = p.perm[r];
        const cd vr = std::conj(p.val_partner[r]);
        A(r, col) = cc * old(r, col) - ics * vk * old(r, pc) + ics * vr * old(pr, col) + ss * vr * vk * old(pr, pc);
      }
    }
  }
}

void Propagator::apply_state(const std::vector<double>& theta, Vec& psi) const {
  if (theta.size() != gens_.size()) throw Error("propagator: wrong number of angles");
  for (std::size_t a = 0; a < gens_.size(); ++a) apply_kernel(gens_[a], theta[a], psi);
}

void Propagator::conjugate(const std::vector<double>& theta, Mat& A) const {
  if (theta.size() != gens_.size()) throw Error("propagator: wrong number of angles");
  for (std::size_t a = gens_.size(); a-- > 0;) conjugate_kernel(gens_[a], theta[a], A);
}

Mat Propagator::unitary(const std::vector<double>& theta) const {
  Mat U = Mat::Identity(N_, N_);
  for (Eigen::Index c = 0; c < N_; ++c) {
    Vec col = U.col(c);
    apply_state(theta, col);
    U.col(c) = col;
  }
  return U;
}

std::vector<double> brownian_increments(std::size_t count, double kappa, double dt, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, std::sqrt(2.0 * kappa * dt));
  std::vector<double> w(count);
  for (auto& x : w) x = nd(rng);
  return w;
}

Operator step_unitary(const GateSet& gates, double kappa, double dt, std::mt19937_64& rng) {
  const Propagator prop(gates);
  const Mat U = prop.unitary(brownian_increments(prop.size(), kappa, dt, rng));
  return Operator(gates.geometry, U);
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("COMMUTANT_LAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<std::vector<double>> run_ensemble(int count, int threads,
                                              const std::function<std::vector<double>(int)>& fn) {
  std::vector<std::vector<double>> out(count);
  const int workers = std::min(resolve_threads(threads), std::max(count, 1));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          out[i] = fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

namespace {

std::vector<double> sample_times(const TrajectoryConfig& cfg) {
  std::vector<double> t;
  const int every = cfg.steps_per_sample();
  for (int s = 0; s <= cfg.num_steps(); s += every) t.push_back(cfg.time_of_step(s));
  return t;
}

// Statistics over trajectories (rows of `data`, one column per sample).
ObservableSeries aggregate(const std::vector<double>& times, const std::vector<std::vector<double>>& data,
                           double window_fraction) {
  ObservableSeries out;
  const std::size_t T = times.size();
  const std::size_t M = data.size();
  out.times = times;
  out.ensemble_size = static_cast<int>(M);
  out.mean.assign(T, 0.0);
  out.std_error.assign(T, 0.0);
  auto stats = [M](const std::vector<double>& x, double& mean, double& se) {
    mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(M);
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    se = M > 1 ? std::sqrt(var / static_cast<double>(M - 1) / static_cast<double>(M)) : 0.0;
  };
  std::vector<double> column(M);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t m = 0; m < M; ++m) column[m] = data[m][t];
    stats(column, out.mean[t], out.std_error[t]);
  }
  const double t_end = times.empty() ? 0.0 : times.back();
  out.window_start = t_end * (1.0 - window_fraction);
  out.window_end = t_end;
  std::size_t first = 0;
  while (first + 1 < T && times[first] < out.window_start - 1e-12) ++first;
  for (std::size_t m = 0; m < M; ++m) {
    double acc = 0.0;
    for (std::size_t t = first; t < T; ++t) acc += data[m][t];
    column[m] = T > first ? acc / static_cast<double>(T - first) : 0.0;
  }
  stats(column, out.time_average, out.time_average_stderr);
  return out;
}

// Runs one trajectory, calling observe(step) at every sample.
template <typename Evolve, typename Observe>
void drive(const TrajectoryConfig& cfg, const Propagator& prop, int index, Evolve evolve, Observe observe) {
  std::mt19937_64 rng(cfg.trajectory_seed(index));
  const int every = cfg.steps_per_sample();
  const int steps = cfg.num_steps();
  std::normal_distribution<double> angle(0.0, cfg.angle_stddev);
  observe();
  for (int s = 1; s <= steps; ++s) {
    if (cfg.mode == DynamicsMode::Brownian) {
      evolve(brownian_increments(prop.size(), cfg.kappa, cfg.dt, rng));
    } else {
      for (int layer = 0; layer < cfg.floquet_depth; ++layer) {
        std::vector<double> th(prop.size());
        for (auto& x : th) x = angle(rng);
        evolve(th);
      }
    }
    if (s % every == 0) observe();
  }
}

}  // namespace

ObservableSeries otoc_series(const TrajectoryConfig& cfg, const Operator& A, const Operator& B) {
  cfg.validate();
  if (!A.is_hermitian() || !B.is_hermitian()) throw Error("otoc_series: A and B must be hermitian");
  const Propagator prop(cfg.gates);
  const Mat A0 = A.dense();
  const SpMat Bs = B.matrix();
  const double inv_dim = 1.0 / static_cast<double>(A0.rows());
  auto run = [&](int index) {
    std::vector<double> samples;
    Mat At = A0;
    drive(
        cfg, prop, index, [&](const std::vector<double>& th) { prop.conjugate(th, At); },
        [&] {
          const Mat M = At * Bs;
          samples.push_back(M.cwiseProduct(M.transpose()).sum().real() * inv_dim);
        });
    return samples;
  };
  return aggregate(sample_times(cfg), run_ensemble(cfg.ensemble_size, cfg.threads, run), cfg.window_fraction);
}

ObservableSeries two_point_series(const TrajectoryConfig& cfg, const Operator& A, const Operator& B) {
  cfg.validate();
  if (!A.is_hermitian() || !B.is_hermitian()) throw Error("two_point_series: A and B must be hermitian");
  const Propagator prop(cfg.gates);
  const Mat A0 = A.dense();
  const SpMat Bt = B.matrix().transpose();
  const double inv_dim = 1.0 / static_cast<double>(A0.rows());
  auto run = [&](int index) {
    std::vector<double> samples;
    Mat At = A0;
    drive(
        cfg, prop, index, [&](const std::vector<double>& th) { prop.conjugate(th, At); },
        [&] {
          cd acc = 0.0;
          for (int c = 0; c < Bt.outerSize(); ++c)
            for (SpMat::InnerIterator it(Bt, c); it; ++it) acc += At(it.col(), it.row()) * it.value();
          samples.push_back(acc.real() * inv_dim);
        });
    return samples;
  };
  return aggregate(sample_times(cfg), run_ensemble(cfg.ensemble_size, cfg.threads, run), cfg.window_fraction);
}

ObservableSeries floquet_series(TrajectoryConfig cfg, const Operator& A, const Operator& B) {
  cfg.mode = DynamicsMode::Floquet;
  return otoc_series(cfg, A, B);
}

std::vector<Renyi2Result> renyi2_sweep(const TrajectoryConfig& cfg, const Vec& psi0,
                                       const std::vector<std::vector<int>>& regions) {
  cfg.validate();
  if (psi0.size() != cfg.gates.geometry.dim()) throw Error("renyi2: state dimension mismatch");
  if (std::abs(psi0.norm() - 1.0) > 1e-9) throw Error("renyi2: initial state must be normalized");
  for (const auto& r : regions)
    for (int s : r)
      if (s < 1 || s > cfg.gates.geometry.num_sites) throw Error("renyi2: region site " + std::to_string(s) + " outside the chain");
  const Propagator prop(cfg.gates);
  const std::size_t R = regions.size();
  auto run = [&](int index) {
    std::vector<double> samples;  // sample-major, R values each
    Vec psi = psi0;
    drive(
        cfg, prop, index, [&](const std::vector<double>& th) { prop.apply_state(th, psi); },
        [&] {
          for (const auto& r : regions) samples.push_back(reduced_purity(psi, cfg.gates.geometry, r));
        });
    return samples;
  };
  const auto raw = run_ensemble(cfg.ensemble_size, cfg.threads, run);
  const std::vector<double> times = sample_times(cfg);
  std::vector<Renyi2Result> out(R);
  for (std::size_t k = 0; k < R; ++k) {
    std::vector<std::vector<double>> purity(raw.size()), entropy(raw.size());
    for (std::size_t m = 0; m < raw.size(); ++m)
      for (std::size_t t = 0; t < times.size(); ++t) {
        const double p = raw[m][t * R + k];
        purity[m].push_back(p);
        entropy[m].push_back(-std::log(p));
      }
    Renyi2Result& res = out[k];
    res.region = regions[k];
    res.purity = aggregate(times, purity, cfg.window_fraction);
    res.entropy = aggregate(times, entropy, cfg.window_fraction);
    for (std::size_t t = 0; t < times.size(); ++t) {
      res.neg_log_mean_purity.push_back(-std::log(res.purity.mean[t]));
      res.neg_log_mean_purity_stderr.push_back(res.purity.std_error[t] / res.purity.mean[t]);
    }
    res.neg_log_time_average = -std::log(res.purity.time_average);
    res.neg_log_time_average_stderr = res.purity.time_average_stderr / res.purity.time_average;
  }
  return out;
}

Renyi2Result renyi2_series(const TrajectoryConfig& cfg, const Vec& psi0, const std::vector<int>& region) {
  return renyi2_sweep(cfg, psi0, {region}).front();
}

namespace {

SpMat vec_columns(const std::vector<SpMat>& frame, Eigen::Index N, bool adjoint) {
  std::vector<Eigen::Triplet<cd>> trip;
  for (std::size_t a = 0; a < frame.size(); ++a)
    for (int c = 0; c < frame[a].outerSize(); ++c)
      for (SpMat::InnerIterator it(frame[a], c); it; ++it) {
        const Eigen::Index i = adjoint ? it.col() : it.row(), j = adjoint ? it.row() : it.col();
        trip.emplace_back(i * N + j, static_cast<Eigen::Index>(a), adjoint ? std::conj(it.value()) : it.value());
      }
  SpMat E(N * N, static_cast<Eigen::Index>(frame.size()));
  E.setFromTriplets(trip.begin(), trip.end());
  E.makeCompressed();
  return E;
}

// sum_x X(x, a) Y(x, b) without conjugation; both compressed column-major.
cd column_dot(const SpMat& X, Eigen::Index a, const SpMat& Y, Eigen::Index b) {
  SpMat::InnerIterator ix(X, a), iy(Y, b);
  cd acc = 0.0;
  while (ix && iy) {
    if (ix.row() < iy.row()) {
      ++ix;
    } else if (iy.row() < ix.row()) {
      ++iy;
    } else {
      acc += ix.value() * iy.value();
      ++ix;
      ++iy;
    }
  }
  return acc;
}

std::vector<Eigen::Index> site_strides(const ChainGeometry& g) {
  std::vector<Eigen::Index> stride(g.num_sites);
  Eigen::Index s = 1;
  for (int k = g.num_sites - 1; k >= 0; --k) {
    stride[k] = s;
    s *= g.local_dims[k];
  }
  return stride;
}

// Offsets of every configuration of `sites` inside the full index.
std::vector<Eigen::Index> offsets(const ChainGeometry& g, const std::vector<int>& sites) {
  const auto stride = site_strides(g);
  std::vector<Eigen::Index> out{0};
  for (int s : sites) {
    std::vector<Eigen::Index> next;
    for (Eigen::Index base : out)
      for (int v = 0; v < g.local_dims[s - 1]; ++v) next.push_back(base + v * stride[s - 1]);
    out = std::move(next);
  }
  return out;
}

}  // namespace

cd super_projection(const FramedSuperBasis& sc, const SpMat& K, const Mat& R) {
  const Eigen::Index N = sc.geometry.dim();
  if (K.rows() != N * N || K.cols() != N * N || R.rows() != N) throw Error("super_projection: size mismatch");
  const SpMat E = vec_columns(sc.frame, N, false);
  SpMat Y = K * vec_columns(sc.frame, N, true);
  Y.makeCompressed();
  const Eigen::Index n = E.cols();
  Vec alpha(n), beta(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    cd x = 0.0, y = 0.0;
    const SpMat& e = sc.frame[a];
    for (int c = 0; c < e.outerSize(); ++c)
      for (SpMat::InnerIterator it(e, c); it; ++it) {
        x += std::conj(it.value()) * R(it.row(), it.col());
        y += it.value() * R(it.col(), it.row());
      }
    alpha[a] = x;
    beta[a] = y;
  }
  cd total = 0.0;
  for (const SpMat& q : sc.q) {
    cd s1 = 0.0, s2 = 0.0;
    for (int b = 0; b < q.outerSize(); ++b)
      for (SpMat::InnerIterator it(q, b); it; ++it) {
        s2 += std::conj(it.value()) * alpha[it.row()] * beta[b];
        if (std::abs(it.value()) > 0.0) s1 += it.value() * column_dot(E, it.row(), Y, b);
      }
    if (std::abs(s2) < 1e-14) continue;
    total += s1 * s2;
  }
  return total;
}

double predicted_otoc(const FramedSuperBasis& sc, const Operator& A, const Operator& B) {
  const Eigen::Index N = sc.geometry.dim();
  if (A.dim() != N || B.dim() != N) throw Error("predicted_otoc: operator dimension mismatch");
  // tr(X B Y B) = vec(X)^T K vec(Y) with K[(i j), (k l)] = B(j, k) B(l, i).
  std::vector<Eigen::Triplet<cd>> trip;
  const SpMat& b = B.matrix();
  for (int k = 0; k < b.outerSize(); ++k)
    for (SpMat::InnerIterator jk(b, k); jk; ++jk)
      for (int i = 0; i < b.outerSize(); ++i)
        for (SpMat::InnerIterator li(b, i); li; ++li)
          trip.emplace_back(i * N + jk.row(), k * N + li.row(), jk.value() * li.value());
  SpMat K(N * N, N * N);
  K.setFromTriplets(trip.begin(), trip.end());
  return super_projection(sc, K, A.dense()).real() / static_cast<double>(N);
}

double predicted_purity_from_scomm(const FramedSuperBasis& sc, const Vec& psi0, const std::vector<int>& region) {
  const ChainGeometry& g = sc.geometry;
  const Eigen::Index N = g.dim();
  if (psi0.size() != N) throw Error("predicted_purity_from_scomm: state dimension mismatch");
  std::vector<int> inside = region, outside;
  std::sort(inside.begin(), inside.end());
  for (int s : inside)
    if (s < 1 || s > g.num_sites) throw Error("predicted_purity_from_scomm: region site outside the chain");
  for (int s = 1; s <= g.num_sites; ++s)
    if (!std::binary_search(inside.begin(), inside.end(), s)) outside.push_back(s);
  // tr(tr_out X tr_out Y) = sum X[(a b), (a' b)] Y[(a' b'), (a b')].
  const auto oa = offsets(g, inside), ob = offsets(g, outside);
  std::vector<Eigen::Triplet<cd>> trip;
  trip.reserve(N * N);
  for (Eigen::Index a : oa)
    for (Eigen::Index a2 : oa)
      for (Eigen::Index b : ob)
        for (Eigen::Index b2 : ob) trip.emplace_back((a + b) * N + (a2 + b), (a2 + b2) * N + (a + b2), 1.0);
  SpMat K(N * N, N * N);
  K.setFromTriplets(trip.begin(), trip.end());
  const Mat rho = psi0 * psi0.adjoint();
  return super_projection(sc, K, rho).real();
}

double mazur_two_point(const OperatorBasis& comm, const Operator& A) {
  if (A.dim() != comm.geometry.dim()) throw Error("mazur_two_point: operator dimension mismatch");
  const Vec overlaps = comm.vectors.adjoint() * comm.frame.pack(A.dense());
  return overlaps.squaredNorm() / static_cast<double>(A.dim());
}

Vec all_down_state(const ChainGeometry& geom) {
  Vec psi = Vec::Zero(geom.dim());
  psi[geom.dim() - 1] = 1.0;
  return psi;
}

}  // namespace clab
