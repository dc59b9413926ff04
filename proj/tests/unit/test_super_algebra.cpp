#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "clab/super_algebra.hpp"
#include "support/oracles.hpp"

using namespace clab;

TEST_CASE("full-space super-commutant against a dense nullspace") {
  for (const std::string name : {"u1", "mg_z2", "universal", "xz_decoupled"}) {
    const GateSet gs = build(name, 2);
    const AlgebraBundle b = analyze_algebras(gs);
    CAPTURE(name);
    CHECK(static_cast<int>(super_commutant(b, Restriction::None).dim()) ==
          oracle::super_commutant_dim(gs.dense_generators()));
  }
}

TEST_CASE("u1 super-commutant dimension 2L^2 + 4L") {
  for (int L : {2, 3}) {
    const AlgebraBundle b = analyze_algebras(build("u1", L));
    CHECK(super_commutant(b, Restriction::None).dim() == static_cast<std::size_t>(2 * L * L + 4 * L));
    CHECK(minimal_super_commutant(b, Restriction::None).dim() == static_cast<std::size_t>(2 * L * L + 4 * L));
  }
}

TEST_CASE("minimal super-commutant is contained in the actual one") {
  for (const std::string name : {"u1", "mg_z2", "xz_decoupled"}) {
    const AlgebraBundle b = analyze_algebras(build(name, 3));
    CAPTURE(name);
    for (Restriction r : {Restriction::None, Restriction::Bond}) {
      const SuperAlgebra sc = super_commutant(b, r), sct = minimal_super_commutant(b, r);
      CHECK(sct.dim() <= sc.dim());
      CHECK(containment_residual(sct, sc) < 1e-7);
    }
  }
}

TEST_CASE("super-commutant elements commute with every restricted generator") {
  const AlgebraBundle b = analyze_algebras(build("mg_z2", 3));
  const SuperSpace space = bond_space(b.bond);
  const SuperAlgebra sc = super_commutant(space, b.gates);
  const auto gens = super_generators(space, b.gates);
  for (std::size_t k = 0; k < sc.dim(); ++k) {
    const Mat q = sc.algebra.original(k);
    for (const auto& g : gens) CHECK((q * g - g * q).norm() < 1e-8);
  }
}

TEST_CASE("full space size limit") { CHECK_THROWS_AS(full_space(ChainGeometry::qubits(6)), SizeLimitError); }

TEST_CASE("u1 bond-space blocks") {
  const AlgebraBundle b = analyze_algebras(build("u1", 3));
  const BlockDecomposition d = block_decomposition(b, Restriction::Bond);
  CHECK(d.consistent());
  std::vector<std::pair<int, int>> dims;
  for (const auto& blk : d.blocks) dims.emplace_back(blk.krylov_dim, blk.degeneracy);
  CHECK(dims == std::vector<std::pair<int, int>>{{8, 1}, {8, 1}, {1, 4}});
  const OperatorBasis dla = dla_from_blocks(d, bond_space(b.bond), b.gates);
  CHECK(dla.dim() == lie_closure(b.gates).dim());
}

TEST_CASE("block dimensions add up to the space") {
  const AlgebraBundle b = analyze_algebras(build("mg_z2", 3));
  const BlockDecomposition d = block_decomposition(b, Restriction::None);
  Eigen::Index total = 0;
  for (const auto& blk : d.blocks) total += static_cast<Eigen::Index>(blk.krylov_dim) * blk.degeneracy;
  CHECK(total == d.space_dim);
  CHECK(total == 64);
}

TEST_CASE("classification of small sets") {
  CHECK(classify(build("u1", 3)).classification == Universality::WeaklyNonUniversal);
  CHECK(classify(build("mg_z2", 3)).classification == Universality::StronglyNonUniversal);
  CHECK(classify(build("universal", 2)).classification == Universality::Universal);
  const UniversalityReport xz = classify(build("xz_decoupled", 3));
  CHECK(xz.classification == Universality::StronglyNonUniversal);
  bool splitting = false;
  for (const auto& n : xz.constraint_notes) splitting = splitting || n.rfind("splitting", 0) == 0;
  CHECK(splitting);
}

TEST_CASE("framed basis is orthonormal in the matrix-unit frame") {
  const AlgebraBundle b = analyze_algebras(build("mg_z2", 2));
  const FramedSuperBasis f = framed(super_commutant(b, Restriction::None));
  REQUIRE(f.dim() == 10);
  for (std::size_t i = 0; i < f.dim(); ++i)
    for (std::size_t j = 0; j < f.dim(); ++j) {
      const cd ip = fro_inner(f.q[i], f.q[j]);
      CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-9);
    }
}
