#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "clab/majorana.hpp"
#include "support/oracles.hpp"

using namespace clab;

TEST_CASE("Pauli string products follow matrix products") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> op(0, 3);
  for (int t = 0; t < 40; ++t) {
    PauliString a = PauliString::identity(3), b = PauliString::identity(3);
    for (int s = 0; s < 3; ++s) {
      a.ops[s] = static_cast<std::uint8_t>(op(rng));
      b.ops[s] = static_cast<std::uint8_t>(op(rng));
    }
    const Mat A = oracle::pauli_string(a.label()), B = oracle::pauli_string(b.label());
    CHECK((Mat((a * b).matrix()) - A * B).norm() < 1e-14);
    CHECK(a.commutes_with(b) == ((A * B - B * A).norm() < 1e-12));
  }
  CHECK(PauliString::parse("XIZ").index() == (1u << 4) + 3u);
  CHECK(PauliString::from_index(3, PauliString::parse("YZX").index()).label() == "YZX");
  CHECK_THROWS_AS(PauliString::parse("XQ"), Error);
}

TEST_CASE("Majorana operators anticommute") {
  for (int L = 1; L <= 5; ++L) CHECK(anticommutation_defect(L) < 1e-14);
  const auto g = ChainGeometry::qubits(3);
  CHECK((jordan_wigner(g, 2, MajoranaKind::Odd).dense() - oracle::pauli_string("ZXI")).norm() < 1e-14);
  CHECK((jordan_wigner(g, 2, MajoranaKind::Even).dense() - oracle::pauli_string("ZYI")).norm() < 1e-14);
  CHECK_THROWS_AS(jordan_wigner(g, 4, MajoranaKind::Odd), Error);
}

TEST_CASE("Majorana table is a bijection with binomial shells") {
  const int L = 3;
  const MajoranaTable t = majorana_table(L);
  std::vector<int> count(2 * L + 1, 0);
  for (int n : t.length) count[n]++;
  for (int n = 0; n <= 2 * L; ++n) CHECK(count[n] == static_cast<int>(oracle::binom(2 * L, n)));
  // sigma = i^phase gamma^mask for a sample of strings.
  for (std::uint64_t idx : {5ull, 17ull, 63ull}) {
    MajoranaString m;
    m.occupation.assign(2 * L, false);
    for (int k = 0; k < 2 * L; ++k) m.occupation[k] = (t.mask[idx] >> k) & 1u;
    m.phase = t.phase[idx];
    const PauliString p = m.realize();
    CHECK(p.index() == idx);
    CHECK(std::abs(p.coefficient() - cd(1, 0)) < 1e-15);
  }
}

TEST_CASE("analytic matchgate super-commutant") {
  for (int L : {2, 3, 4}) {
    const FramedSuperBasis f = analytic_mg_scomm(L);
    CHECK(f.dim() == static_cast<std::size_t>(4 * L + 2));
    for (std::size_t i = 0; i < f.dim(); ++i)
      for (std::size_t j = 0; j <= i; ++j) CHECK(std::abs(fro_inner(f.q[i], f.q[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
  }
}

TEST_CASE("Majorana number superoperator commutes with the matchgate Liouvillians") {
  const int L = 3;
  const SuperOperator num = majorana_number_superop(L);
  for (const auto& g : build("mg_z2", L).generators) {
    const Mat a = oracle::ad(g.op.dense());
    CHECK((Mat(num.entries) * a - a * Mat(num.entries)).norm() < 1e-10);
  }
  CHECK_THROWS_AS(majorana_number_superop(6), SizeLimitError);
}

TEST_CASE("generalized product of the length-1 projector") {
  // Q1 projects on normalized single Majoranas; its square through the
  // two-copy pattern is Q2 / N^2 with Q2 = sum_nm |g_n g_m>><<g_m g_n|.
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
    for (const auto& b : g) Q2 += oracle::vec_rowmajor(a * b) * oracle::vec_rowmajor(b * a).adjoint();
  CHECK((generalized_product(Q1, Q1, N) - Q2 / double(N * N)).norm() < 1e-12);
}

TEST_CASE("matchgate block structure") {
  for (int L : {2, 3}) {
    const MgDecompositionCheck c = verify_mg_decomposition(L, Boundary::Open);
    CHECK(c.ok);
    CHECK(c.number_conserved);
  }
  CHECK(verify_mg_decomposition(3, Boundary::Periodic).ok);
}

TEST_CASE("closed forms") {
  CHECK(predicted_otoc_mg(6) == doctest::Approx(1.0 - 40.0 / 66.0).epsilon(1e-14));
  for (int L : {4, 8, 12})
    for (int l = 0; l <= L; ++l)
      CHECK(predicted_purity(L, l, PurityKind::Universal) == doctest::Approx(oracle::page_purity_uni(L, l)).epsilon(1e-13));
  // Pure state: both ends are trivially pure.
  CHECK(predicted_purity(4, 0, PurityKind::Matchgate) == doctest::Approx(1.0));
  CHECK(predicted_purity(4, 4, PurityKind::Matchgate) == doctest::Approx(1.0));
  CHECK_THROWS_AS(predicted_purity(4, 5, PurityKind::Universal), Error);
}
