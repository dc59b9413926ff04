#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "clab/linalg.hpp"
#include "clab/operator_space.hpp"
#include "support/oracles.hpp"

using namespace clab;

TEST_CASE("embed_local matches explicit Kronecker products") {
  const auto g = ChainGeometry::qubits(4);
  CHECK((embed_local(pauli('X'), {2}, g).dense() - oracle::pauli_string("IXII")).norm() < 1e-14);
  CHECK((embed_local(oracle::pauli_string("XZ"), {1, 3}, g).dense() - oracle::pauli_string("XIZI")).norm() < 1e-14);
  // Reversed site order swaps the tensor factors.
  CHECK((embed_local(oracle::pauli_string("XZ"), {4, 1}, g).dense() - oracle::pauli_string("ZIIX")).norm() < 1e-14);
}

TEST_CASE("qutrit geometry and validation") {
  const auto g = ChainGeometry::qutrits(3);
  CHECK(g.dim() == 27);
  ChainGeometry bad;
  bad.num_sites = 2;
  bad.local_dims = {2};
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK_THROWS_AS(ChainGeometry::qubits(20).validate(1 << 16), SizeLimitError);
}

TEST_CASE("adjoint superoperator acts as a commutator") {
  std::mt19937_64 rng(3);
  const auto g = ChainGeometry::qubits(2);
  const Mat K = oracle::random_hermitian(4, rng), O = oracle::random_hermitian(4, rng);
  const SuperOperator L = adjoint_superop(Operator(g, K));
  CHECK((L.apply(vec_rowmajor(O)) - oracle::vec_rowmajor(K * O - O * K)).norm() < 1e-12);
  CHECK((Mat(L.entries) - oracle::ad(K)).norm() < 1e-12);
}

TEST_CASE("vectorize round trip and Hilbert-Schmidt inner product") {
  std::mt19937_64 rng(4);
  const auto g = ChainGeometry::qubits(2);
  const Mat A = oracle::random_hermitian(4, rng), B = oracle::random_hermitian(4, rng);
  const Operator a(g, A), b(g, B);
  CHECK((devectorize(vectorize(a)).dense() - A).norm() < 1e-14);
  CHECK(std::abs(hs_inner(a, b) - (A.adjoint() * B).trace()) < 1e-12);
  CHECK((commutator(a, b).dense() - (A * B - B * A)).norm() < 1e-12);
}

TEST_CASE("partial trace and purity against index loops") {
  std::mt19937_64 rng(9);
  const auto g = ChainGeometry::qubits(3);
  Vec psi = Vec::Random(8);
  psi.normalize();
  const Mat rho = psi * psi.adjoint();
  // Trace out site 2: rho_13[(a c), (a' c')] = sum_b rho[(a b c), (a' b c')].
  Mat ref = Mat::Zero(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c)
      for (int a2 = 0; a2 < 2; ++a2)
        for (int c2 = 0; c2 < 2; ++c2)
          for (int b = 0; b < 2; ++b) ref(a * 2 + c, a2 * 2 + c2) += rho(a * 4 + b * 2 + c, a2 * 4 + b * 2 + c2);
  CHECK((partial_trace(Operator(g, rho), {2}).dense() - ref).norm() < 1e-12);
  CHECK(std::abs(reduced_purity(psi, g, {1, 3}) - (ref * ref).trace().real()) < 1e-12);
  CHECK(reduced_purity(psi, g, {}) == doctest::Approx(1.0));
  const Operator full = partial_trace(Operator(g, rho), {1, 2, 3});
  CHECK(full.dim() == 1);
}

TEST_CASE("partial transpose pattern") {
  std::mt19937_64 rng(2);
  const auto g = ChainGeometry::qubits(1);
  SuperOperator S;
  S.geometry = g;
  const Mat M = oracle::random_hermitian(4, rng);
  S.entries = M.sparseView();
  const SuperOperator same = partial_transpose_pattern(S, {0, 1, 2, 3});
  CHECK((Mat(same.entries) - M).norm() < 1e-14);
  // Swapping the last two slots: T[(i j), (l k)] = S[(i j), (k l)].
  const SuperOperator sw = partial_transpose_pattern(S, {0, 1, 3, 2});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) CHECK(std::abs(Mat(sw.entries)(i * 2 + j, l * 2 + k) - M(i * 2 + j, k * 2 + l)) < 1e-14);
}

TEST_CASE("spin matrices are half the Pauli matrices") {
  for (char c : {'X', 'Y', 'Z'}) CHECK((spin(c) - 0.5 * oracle::pauli(c)).norm() < 1e-15);
}
