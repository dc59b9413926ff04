#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/lemmas.hpp"

TEST_CASE("adjoint map is a Lie homomorphism") {
  const auto v = lemma::lie_homomorphism();
  INFO(v.detail);
  CHECK(v.ok);
}

TEST_CASE("bond algebra equals the double commutant") {
  const auto v = lemma::double_commutant();
  INFO(v.detail);
  CHECK(v.ok);
}

TEST_CASE("minimal super-commutant sits inside the actual one") {
  const auto v = lemma::minimal_inside_actual();
  INFO(v.detail);
  CHECK(v.ok);
}

TEST_CASE("sector projectors, traceless overlaps, center projections") {
  for (const auto& v : lemma::sector_lemmas()) {
    INFO(v.name << ": " << v.detail);
    CHECK(v.ok);
  }
}

TEST_CASE("Majorana number superoperator") {
  const auto v = lemma::majorana_number_scar();
  INFO(v.detail);
  CHECK(v.ok);
}

TEST_CASE("generalized product") { CHECK(lemma::generalized_product_identity().ok); }
