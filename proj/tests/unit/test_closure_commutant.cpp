#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "clab/commutant_solver.hpp"
#include "support/oracles.hpp"

using namespace clab;

TEST_CASE("lie closure dimensions against a plain Gram-Schmidt closure") {
  for (const std::string name : {"u1", "mg_z2", "xz_decoupled", "universal"})
    for (int L : {2, 3}) {
      const GateSet gs = build(name, L);
      CAPTURE(name);
      CAPTURE(L);
      CHECK(lie_closure(gs).dim() ==
            oracle::closure_dim(gs.dense_generators(), true, false));
    }
}

TEST_CASE("matchgate DLA is so(2L)") {
  for (int L : {2, 3, 4}) CHECK(lie_closure(build("mg_z2", L)).dim() == L * (2 * L - 1));
}

TEST_CASE("associative closure equals the double commutant") {
  for (const std::string name : {"u1", "z2", "mg_z2"}) {
    const GateSet gs = build(name, 3);
    const OperatorBasis bond = associative_closure(gs.dense_generators(), gs.geometry);
    CAPTURE(name);
    CHECK(bond.dim() == oracle::closure_dim(gs.dense_generators(), false, true));
    CHECK(bond.dim() == oracle::double_commutant_dim(gs.dense_generators()));
    CHECK(bond.contains_identity());
  }
}

TEST_CASE("extend_basis rejects dependent vectors") {
  OperatorBasis b;
  b.geometry = ChainGeometry::qubits(1);
  b.frame = BlockFrame::identity(2);
  b.vectors = Mat(4, 0);
  Vec x = Vec::Zero(4);
  x(0) = 1.0;
  CHECK(extend_basis(b, x) == ExtendOutcome::Added);
  CHECK(extend_basis(b, 3.0 * x) == ExtendOutcome::Rejected);
  x(3) = 1.0;
  CHECK(extend_basis(b, x) == ExtendOutcome::Added);
  CHECK(b.dim() == 2);
}

TEST_CASE("commutant dimensions against dense nullspaces") {
  for (const std::string name : {"u1", "su2", "mg_z2", "z2", "xz_decoupled", "translation"}) {
    const GateSet gs = build(name, 3);
    CAPTURE(name);
    CHECK(commutant(gs).dim() == oracle::commutant(gs.dense_generators()).cols());
  }
  const GateSet t = build("tjz", 2);
  CHECK(commutant(t).dim() == oracle::commutant(t.dense_generators()).cols());
}

TEST_CASE("compressed and dense solvers agree") {
  const GateSet gs = build("u1", 4);
  SolveOptions dense, compressed;
  dense.method = SolveOptions::Method::Dense;
  compressed.method = SolveOptions::Method::Compressed;
  const OperatorBasis a = commutant(gs, dense), b = commutant(gs, compressed);
  CHECK(a.dim() == 5);
  CHECK(same_span(a.full_vectors(), b.full_vectors()));
}

TEST_CASE("compressed solver respects its size limit") {
  SolveOptions opt;
  opt.method = SolveOptions::Method::Compressed;
  opt.max_unknowns = 10;
  CHECK_THROWS_AS(commutant(build("xz_decoupled", 4), opt), SizeLimitError);
}

TEST_CASE("sector projectors and irrep dimensions for u1") {
  const int L = 3;
  const GateSet gs = build("u1", L);
  const OperatorBasis comm = commutant(gs);
  const OperatorBasis bond = associative_closure(gs.dense_generators(), gs.geometry);
  const OperatorBasis z = center(bond, comm);
  CHECK(z.dim() == L + 1);
  const auto projs = sector_projectors(z);
  REQUIRE(projs.size() == static_cast<std::size_t>(L + 1));
  CHECK(check_projectors(projs, gs).worst() < 1e-9);
  std::vector<int> ranks;
  for (const auto& p : projs) {
    const IrrepDims d = irrep_dimensions(p, bond, comm);
    CHECK(d.d == 1);
    CHECK(d.D == d.rank);
    ranks.push_back(d.rank);
  }
  std::sort(ranks.begin(), ranks.end());
  CHECK(ranks == std::vector<int>{1, 1, 3, 3});
}

TEST_CASE("center of a non-commutative commutant") {
  // su2 at L = 3: commutant is not abelian, center spanned by the two spin projectors.
  const GateSet gs = build("su2", 3);
  const OperatorBasis comm = commutant(gs);
  CHECK(comm.dim() == oracle::commutant(gs.dense_generators()).cols());
  CHECK(center_of(comm).dim() == 2);
}
