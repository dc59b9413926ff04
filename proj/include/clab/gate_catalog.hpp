#pragma once

#include "clab/operator_space.hpp"

#include <optional>
#include <string>
#include <vector>

namespace clab {

// One summand of a generator, supported on a few sites. When `pauli` is set
// the term equals coeff * (Pauli string `pauli` on `sites`).
struct LocalTerm {
  std::vector<int> sites;
  Mat matrix;
  std::string pauli;
  double coeff = 1.0;
};

struct Generator {
  std::string label;
  Operator op;
  std::vector<LocalTerm> terms;
  bool terms_commute = true;  // exp(-i t h) factorizes over terms
  bool is_identity = false;
};

struct GateSet {
  std::string name;
  ChainGeometry geometry;
  std::vector<Generator> generators;
  bool include_identity = false;
  int locality = 2;

  std::size_t size() const { return generators.size(); }
  std::vector<Mat> dense_generators() const;
  std::vector<Operator> operators() const;
  // Generators without the identity entry.
  std::vector<Mat> dense_nontrivial() const;
};

struct CatalogEntry {
  std::string name;
  Boundary default_boundary;
  std::string count_formula;
  std::string description;
  int local_dim;
};

const std::vector<CatalogEntry>& catalog();
const CatalogEntry& catalog_entry(const std::string& name);

GateSet build(const std::string& name, int L, std::optional<Boundary> boundary = std::nullopt,
              std::optional<int> k = std::nullopt);

// Wraps user operators; every one must be hermitian and share the geometry.
GateSet custom(const std::vector<Operator>& ops, const std::string& name = "custom");

// Returns a copy with the identity appended (no-op when already present).
GateSet with_identity(const GateSet& g);

// Three-level local operators for the t-J_z family, basis {up, 0, down}.
Mat tjz_z();
Mat tjz_hop();

}  // namespace clab
