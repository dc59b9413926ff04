#pragma once

#include "clab/super_algebra.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace clab {

// Tensor product of single-qubit Paulis times i^phase. ops[s] for site s+1:
// 0 = I, 1 = X, 2 = Y, 3 = Z.
struct PauliString {
  std::vector<std::uint8_t> ops;
  int phase = 0;

  static PauliString identity(int L);
  static PauliString from_index(int L, std::uint64_t index);
  static PauliString parse(const std::string& label);  // e.g. "XZIY"
  int size() const { return static_cast<int>(ops.size()); }
  int weight() const;
  std::string label() const;
  // Base-4 index of the bare string, site 1 most significant.
  std::uint64_t index() const;
  bool commutes_with(const PauliString& o) const;
  PauliString operator*(const PauliString& o) const;
  cd coefficient() const;  // i^phase
  SpMat matrix() const;    // includes the phase
  Operator op() const;
};

enum class MajoranaKind { Odd, Even };

// gamma_k for k = 1..2L as a Pauli string.
PauliString majorana_pauli(int L, int k);
// gamma_{2j-1} (Odd) or gamma_{2j} (Even).
Operator jordan_wigner(const ChainGeometry& geom, int j, MajoranaKind kind);
// max over k, l of || {gamma_k, gamma_l} - 2 delta_kl ||.
double anticommutation_defect(int L);

struct MajoranaString {
  std::vector<bool> occupation;  // length 2L
  int phase = 0;                 // i^phase
  int length() const;
  // Ascending product gamma_{k1} gamma_{k2} ..., times i^phase.
  PauliString realize() const;
};

// Every Pauli string is a Majorana string up to a phase:
// sigma_index = i^phase(index) * gamma^{mask(index)}.
struct MajoranaTable {
  int L = 0;
  std::vector<int> length;
  std::vector<std::uint32_t> mask;
  std::vector<int> phase;
};
MajoranaTable majorana_table(int L);

// N_gamma = sum_n n sum_{|a| = n} |a>><<a| on normalized strings.
SuperOperator majorana_number_superop(int L, int max_L = 5);

// span{Pi_n, L_P Pi_n : n = 0..2L} in the normalized Pauli frame, where Pi_n
// projects on Majorana length n and L_P is left multiplication by the parity.
FramedSuperBasis analytic_mg_scomm(int L);

// Product through the two-copy commutant: Q -> Qbar with
// Qbar[(i l), (j k)] = Q[(i j), (k l)], multiply, map back.
Mat generalized_product(const Mat& Qa, const Mat& Qb, Eigen::Index n);

struct MgBlockSignature {
  int D = 0, d = 0;
  std::vector<int> lengths;  // Majorana lengths the block occupies
  bool operator<(const MgBlockSignature& o) const;
  bool operator==(const MgBlockSignature& o) const;
  std::string str() const;
};
struct MgDecompositionCheck {
  bool ok = true;
  bool number_conserved = false;  // N_gamma commutes with every L_h
  std::vector<MgBlockSignature> expected, actual;
  std::vector<std::string> mismatches;
};
// Compares the full-space block decomposition of mg_z2 with the Majorana-length
// structure. OBC: (n, 2L-n) pairs with d = 2 for n < L and a parity split at
// n = L. PBC: only the even pairs 2 <= n < L are asserted; each becomes two
// non-degenerate blocks spanning both lengths.
MgDecompositionCheck verify_mg_decomposition(int L, Boundary bc);

// Late-time OTOC of Z_j under matchgates: 1 - 8(L-1)/(2L^2 - L).
double predicted_otoc_mg(int L);

enum class PurityKind { Universal, Matchgate };
// Late-time purity of an l-site subsystem; the matchgate form assumes the
// all-down initial state.
double predicted_purity(int L, int ell, PurityKind kind);

}  // namespace clab
