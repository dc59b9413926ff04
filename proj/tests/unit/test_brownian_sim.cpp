#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "clab/brownian_sim.hpp"
#include "support/oracles.hpp"

using namespace clab;

namespace {

std::vector<double> random_angles(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 0.7);
  std::vector<double> th(n);
  for (auto& t : th) t = nd(rng);
  return th;
}

// Product of dense exponentials, first generator applied first.
Mat dense_step(const GateSet& gs, const std::vector<double>& th) {
  const Eigen::Index N = gs.geometry.dim();
  Mat U = Mat::Identity(N, N);
  std::size_t a = 0;
  for (const auto& g : gs.generators) {
    if (g.is_identity) continue;
    U = (Mat(cd(0, -th[a++]) * g.op.dense()).exp() * U).eval();
  }
  return U;
}

// Late-time OTOC from the two-copy commutant of {h (x) 1 + 1 (x) h}.
double two_copy_otoc(const GateSet& gs, const Mat& A, const Mat& B) {
  const Eigen::Index N = A.rows();
  const Mat I = Mat::Identity(N, N);
  std::vector<Mat> gens;
  for (const Mat& h : gs.dense_nontrivial())
    gens.push_back(Eigen::kroneckerProduct(h, I).eval() + Eigen::kroneckerProduct(I, h).eval());
  const Mat C = oracle::commutant(gens);
  const Vec x = oracle::vec_rowmajor(Eigen::kroneckerProduct(A, A).eval());
  const Mat Y = oracle::unvec(C * (C.adjoint() * x), N * N);
  Mat swap = Mat::Zero(N * N, N * N);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j) swap(i * N + j, j * N + i) = 1.0;
  const Mat BB = Eigen::kroneckerProduct(B, B).eval();
  return (Y * BB * swap).trace().real() / static_cast<double>(N);
}

TrajectoryConfig small_config(const std::string& name, int L) {
  TrajectoryConfig cfg;
  cfg.gates = build(name, L);
  cfg.dt = 0.05;
  cfg.t_max = 1.0;
  cfg.ensemble_size = 8;
  cfg.sample_every = 2;
  cfg.master_seed = 42;
  cfg.threads = 1;
  return cfg;
}

}  // namespace

TEST_CASE("propagator matches dense exponentials") {
  for (const std::string name : {"mg_z2", "u1", "su2", "universal", "tjz", "z2"}) {
    const GateSet gs = build(name, name == "tjz" ? 2 : 3);
    const Propagator prop(gs);
    const auto th = random_angles(prop.size(), 7);
    const Mat U = prop.unitary(th), ref = dense_step(gs, th);
    CAPTURE(name);
    CHECK((U.adjoint() * U - Mat::Identity(U.rows(), U.cols())).norm() < 1e-10);
    CHECK((U - ref).norm() < 1e-10);

    std::mt19937_64 rng(3);
    const Mat H = oracle::random_hermitian(U.rows(), rng);
    Mat A = H;
    prop.conjugate(th, A);
    CHECK((A - ref.adjoint() * H * ref).norm() < 1e-10 * H.norm());

    Vec psi = Vec::Zero(U.rows());
    psi(1) = 1.0;
    const Vec expect = ref * psi;
    prop.apply_state(th, psi);
    CHECK((psi - expect).norm() < 1e-12);
  }
}

TEST_CASE("vanishing increments give the identity") {
  const GateSet gs = build("u1", 3);
  const Propagator prop(gs);
  const Mat U = prop.unitary(std::vector<double>(prop.size(), 0.0));
  CHECK((U - Mat::Identity(8, 8)).norm() < 1e-15);
  std::mt19937_64 rng(1);
  const auto inc = brownian_increments(1000, 1.0, 1e-12, rng);
  for (double x : inc) CHECK(std::abs(x) < 1e-4);
}

TEST_CASE("increments have variance 2 kappa dt") {
  std::mt19937_64 rng(9);
  const double kappa = 1.5, dt = 0.02;
  const auto inc = brownian_increments(200000, kappa, dt, rng);
  double s = 0, s2 = 0;
  for (double x : inc) {
    s += x;
    s2 += x * x;
  }
  const double n = static_cast<double>(inc.size()), var = s2 / n - (s / n) * (s / n);
  // Relative standard error of the sample variance is sqrt(2/n) ~ 0.003.
  CHECK(std::abs(var / (2 * kappa * dt) - 1.0) < 0.02);
}

TEST_CASE("single-site Z generator produces diagonal phases") {
  const auto g = ChainGeometry::qubits(2);
  const GateSet gs = custom({Operator(g, Mat(oracle::on_site('Z', 1, 2)))});
  const Propagator prop(gs);
  const Mat U = prop.unitary({0.3});
  CHECK((U - Mat(Eigen::Vector4cd(std::polar(1.0, -0.3), std::polar(1.0, -0.3), std::polar(1.0, 0.3),
                                  std::polar(1.0, 0.3)).asDiagonal())).norm() < 1e-14);
}

TEST_CASE("two-copy average of Brownian evolution") {
  // E[U (x) conj(U)] = exp(-kappa t sum_a D_a^2), D_a = h_a (x) 1 - 1 (x) conj(h_a),
  // up to a Trotter error of order kappa dt t.
  const GateSet gs = build("mg_z2", 2);
  const Propagator prop(gs);
  const double kappa = 1.0, dt = 1e-3;
  const int steps = 200, M = 10000;
  const Eigen::Index N = 4;
  const Mat I = Mat::Identity(N, N);
  Mat P2 = Mat::Zero(N * N, N * N);
  for (const Mat& h : gs.dense_nontrivial()) {
    const Mat D = Eigen::kroneckerProduct(h, I).eval() - Eigen::kroneckerProduct(I, Mat(h.conjugate())).eval();
    P2 += D * D;
  }
  const Mat expect = Mat(-kappa * steps * dt * P2).exp();
  Mat sum = Mat::Zero(N * N, N * N);
  RMat sq = RMat::Zero(N * N, N * N);
  std::mt19937_64 rng(2024);
  for (int m = 0; m < M; ++m) {
    Mat U = Mat::Identity(N, N);
    for (int s = 0; s < steps; ++s) U = (prop.unitary(brownian_increments(prop.size(), kappa, dt, rng)) * U).eval();
    const Mat T = Eigen::kroneckerProduct(U, Mat(U.conjugate())).eval();
    sum += T;
    sq += T.cwiseAbs2();
  }
  const Mat mean = sum / double(M);
  const RMat var = (sq / double(M) - mean.cwiseAbs2()).cwiseMax(0.0);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < mean.rows(); ++i)
    for (Eigen::Index j = 0; j < mean.cols(); ++j) {
      const double se = std::sqrt(var(i, j) / M);
      worst = std::max(worst, std::abs(mean(i, j) - expect(i, j)) - 5 * se);
    }
  CHECK(worst < 1e-3);
  // The step itself is unitary.
  const Mat U = step_unitary(gs, kappa, 0.1, rng).dense();
  CHECK((U.adjoint() * U - I).norm() < 1e-10);
}

TEST_CASE("OTOC starts at one and stays constant without dynamics") {
  TrajectoryConfig cfg = small_config("mg_z2", 3);
  const Operator Z = embed_local(pauli('Z'), {2}, cfg.gates.geometry);
  const ObservableSeries s = otoc_series(cfg, Z, Z);
  REQUIRE(s.times.size() == 11);
  CHECK(s.times.front() == 0.0);
  CHECK(s.mean.front() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.std_error.front() < 1e-12);
  CHECK(s.ensemble_size == 8);

  cfg.mode = DynamicsMode::Floquet;
  cfg.t_max = 5;
  cfg.floquet_depth = 0;
  const ObservableSeries f = floquet_series(cfg, Z, Z);
  REQUIRE(f.times.size() == 6);
  for (double v : f.mean) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two-point function of a conserved charge is constant") {
  TrajectoryConfig cfg = small_config("u1", 3);
  Operator Ztot = Operator::zero(cfg.gates.geometry);
  for (int j = 1; j <= 3; ++j) Ztot = Ztot + embed_local(pauli('Z'), {j}, cfg.gates.geometry);
  const ObservableSeries s = two_point_series(cfg, Ztot, Ztot);
  for (double v : s.mean) CHECK(v == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("Renyi entropy of a product state starts at zero") {
  TrajectoryConfig cfg = small_config("universal", 4);
  const Vec psi = all_down_state(cfg.gates.geometry);
  const auto res = renyi2_sweep(cfg, psi, {{}, {1}, {1, 2}, {1, 2, 3, 4}});
  for (const auto& r : res) {
    CHECK(r.entropy.mean.front() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(r.purity.mean.front() - 1.0) < 1e-12);
  }
  for (double v : res[0].entropy.mean) CHECK(std::abs(v) < 1e-12);
  for (double v : res[3].entropy.mean) CHECK(std::abs(v) < 1e-10);
  CHECK(res[2].entropy.mean.back() > 0.1);
  CHECK_THROWS_AS(renyi2_series(cfg, psi, {5}), Error);
}

TEST_CASE("ensemble results do not depend on the thread count") {
  TrajectoryConfig cfg = small_config("mg_z2", 4);
  const Operator Z = embed_local(pauli('Z'), {2}, cfg.gates.geometry);
  cfg.threads = 1;
  const ObservableSeries a = otoc_series(cfg, Z, Z);
  cfg.threads = 3;
  const ObservableSeries b = otoc_series(cfg, Z, Z);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  cfg.master_seed = 43;
  CHECK(otoc_series(cfg, Z, Z).mean != a.mean);
}

TEST_CASE("window statistics") {
  TrajectoryConfig cfg = small_config("z2", 3);
  cfg.t_max = 2.0;
  const Operator X = embed_local(pauli('X'), {1}, cfg.gates.geometry);
  const ObservableSeries s = otoc_series(cfg, X, X);
  CHECK(s.window_start == doctest::Approx(1.0));
  CHECK(s.window_end == doctest::Approx(2.0));
  CHECK(s.time_average_stderr > 0.0);
}

TEST_CASE("late-time OTOC prediction matches a two-copy commutant") {
  for (const std::string name : {"u1", "mg_z2", "universal", "xz_decoupled"}) {
    const GateSet gs = build(name, 2);
    const FramedSuperBasis f = framed(super_commutant(analyze_algebras(gs), Restriction::None));
    const Mat Z = oracle::on_site('Z', 1, 2), X = oracle::on_site('X', 2, 2);
    CAPTURE(name);
    CHECK(predicted_otoc(f, Operator(gs.geometry, Z), Operator(gs.geometry, Z)) ==
          doctest::Approx(two_copy_otoc(gs, Z, Z)).epsilon(1e-10));
    CHECK(predicted_otoc(f, Operator(gs.geometry, Z), Operator(gs.geometry, X)) ==
          doctest::Approx(two_copy_otoc(gs, Z, X)).epsilon(1e-10));
  }
}

TEST_CASE("universal prediction and trivial operator") {
  const GateSet gs = build("universal", 3);
  const FramedSuperBasis f = framed(super_commutant(analyze_algebras(gs), Restriction::None));
  const Operator Z1 = embed_local(pauli('Z'), {1}, gs.geometry), X3 = embed_local(pauli('X'), {3}, gs.geometry);
  CHECK(predicted_otoc(f, Z1, X3) == doctest::Approx(-1.0 / 63.0).epsilon(1e-10));
  const Operator one = Operator::identity(gs.geometry);
  CHECK(predicted_otoc(f, one, X3) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("purity prediction against the Haar closed form") {
  const GateSet gs = build("universal", 3);
  const FramedSuperBasis f = framed(super_commutant(analyze_algebras(gs), Restriction::None));
  const Vec psi = all_down_state(gs.geometry);
  CHECK(predicted_purity_from_scomm(f, psi, {1}) == doctest::Approx(oracle::page_purity_uni(3, 1)).epsilon(1e-10));
  CHECK(predicted_purity_from_scomm(f, psi, {1, 2}) == doctest::Approx(oracle::page_purity_uni(3, 2)).epsilon(1e-10));
}

TEST_CASE("Mazur bound for u1") {
  const GateSet gs = build("u1", 3);
  const OperatorBasis comm = commutant(gs);
  Operator Ztot = Operator::zero(gs.geometry);
  for (int j = 1; j <= 3; ++j) Ztot = Ztot + embed_local(pauli('Z'), {j}, gs.geometry);
  CHECK(mazur_two_point(comm, Ztot) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(std::abs(mazur_two_point(comm, embed_local(pauli('X'), {1}, gs.geometry))) < 1e-12);
  CHECK(mazur_two_point(comm, Operator::identity(gs.geometry)) == doctest::Approx(1.0).epsilon(1e-12));
  // Z_1 overlaps the charge sectors: |<<Q|Z_1>>|^2 summed gives 1/L of the total-charge weight.
  CHECK(mazur_two_point(comm, embed_local(pauli('Z'), {1}, gs.geometry)) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("config validation") {
  TrajectoryConfig cfg = small_config("u1", 3);
  cfg.dt = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = small_config("u1", 3);
  cfg.window_fraction = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = small_config("u1", 3);
  cfg.dt = 1.0;
  CHECK_FALSE(cfg.warnings().empty());
  CHECK(cfg.trajectory_seed(0) != cfg.trajectory_seed(1));
}
