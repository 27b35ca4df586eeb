#pragma once

#include <cstdint>
#include <vector>

#include "zerofid/circuit.hpp"
#include "zerofid/linalg.hpp"
#include "zerofid/rng.hpp"

namespace zerofid {

// Signed Hermitian Pauli (-1)^sign * P(x, z) with P = i^{|x & z|} X^x Z^z,
// so per-qubit bits (x, z) read I/X/Y/Z as (0,0)/(1,0)/(1,1)/(0,1).
struct PauliRow {
  std::uint32_t x = 0;
  std::uint32_t z = 0;
  bool sign = false;

  bool operator==(const PauliRow&) const = default;
};

// Clifford group element as a stabilizer tableau: images[k] is the
// conjugation image of X_k for k < n and of Z_{k-n} for k >= n.
struct CliffordElement {
  int n = 0;
  std::vector<PauliRow> images;

  static CliffordElement identity(int n);

  // element <- gate o element (the gate acts after everything so far).
  void append_h(int q);
  void append_s(int q);
  void append_sdg(int q);
  void append_x(int q);
  void append_y(int q);
  void append_z(int q);
  void append_cnot(int c, int t);
  void append_cz(int a, int b);

  PauliRow image_of(const PauliRow& p) const;

  bool operator==(const CliffordElement&) const = default;
};

// a after b.
CliffordElement compose(const CliffordElement& a, const CliffordElement& b);
CliffordElement inverse(const CliffordElement& c);

// Exactly uniform over the n-qubit Clifford group via the canonical-form
// sampler of Bravyi & Maslov, arXiv:2003.09412; supported for 1 <= n <= 3.
CliffordElement random_clifford(int n, RngStream& rng);

// Synthesis over {H, S, CNOT} plus Paulis; tableau_of(clifford_to_circuit(c)) == c.
Circuit clifford_to_circuit(const CliffordElement& c);

// Tableau of a Clifford-only circuit; throws Unsupported on U3 gates.
CliffordElement tableau_of(const Circuit& circ);

// Unitary (up to global phase) realizing the element.
CMat clifford_to_unitary(const CliffordElement& c);

}  // namespace zerofid
