#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "zerofid/linalg.hpp"

namespace zerofid {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

// Tensor product of single-qubit Paulis, qubit 0 leftmost.  Unnormalized:
// Tr[W W] = 2^n.
struct PauliString {
  std::vector<Pauli> factors;

  bool operator==(const PauliString&) const = default;

  int n_qubits() const { return static_cast<int>(factors.size()); }
  int weight() const;
  bool is_identity() const;

  // Lexicographic index with I < X < Y < Z and qubit 0 as the most
  // significant base-4 digit; index 0 is the identity string.
  static PauliString from_index(int n, std::uint64_t index);
  std::uint64_t index() const;

  static PauliString parse(std::string_view s);
  std::string str() const;

  CMat realize() const;
};

const CMat& pauli_matrix(Pauli p);

std::vector<PauliString> pauli_basis(int n);

struct DensityMatrix {
  int n_qubits = 0;
  CMat mat;

  static DensityMatrix pure(const CVec& psi);
  static DensityMatrix maximally_mixed(int n);

  // Throws InvalidArgument unless Hermitian to 1e-10, unit trace to 1e-10,
  // and eigenvalues >= -1e-9.
  void validate() const;
};

// The four SIC kets: |0> and three states at common overlap |<i|j>|^2 = 1/3.
const std::vector<CVec>& sic_kets();

// U3 Euler angles (theta, phi, lambda) preparing sic_kets()[i] from |0>.
std::array<double, 3> sic_prep_angles(int i);

// All 4^n SIC product states in lexicographic index order (qubit 0 is the
// most significant base-4 digit).
std::vector<DensityMatrix> sic_states(int n);

// Tr[rho W], real within 1e-9 for valid inputs; the identity string returns
// exactly 1.
double expectation(const DensityMatrix& rho, const PauliString& w);

// All 4^n Pauli expectations at once, aligned with pauli_basis(n) indexing.
RVec pauli_expectations(const CMat& rho);

// y[j] = sum_v (ox_q M_q)[w_j, v] x[v] where x is a vec'd operator and w_j
// runs over pauli_basis order; site_mats holds one 4x4 per qubit (or a
// single shared one).  Row order of each site matrix is (I, X, Y, Z) against
// single-qubit vec components (rho00, rho10, rho01, rho11).
CVec pauli_site_transform(const CVec& x, int n, std::span<const CMat> site_mats);

// The shared measurement-functional matrix for ideal readout.
const CMat& pauli_trace_site_matrix();

}  // namespace zerofid
