#pragma once

#include <complex>
#include <span>

#include <Eigen/Dense>

namespace zerofid {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// Column-stacking vectorization: vec(M)(j*rows + i) = M(i, j), so
// [[1,2],[3,4]] becomes (1,3,2,4)^T and vec(ABC) = (C^T x A) vec(B).
CVec vec(const CMat& m);
CMat unvec(const CVec& v);

CMat kron(const CMat& a, const CMat& b);
CMat dagger(const CMat& m);

// Hilbert-Schmidt inner product Tr[a^dagger b] = vec(a)^dagger vec(b).
cplx hs_inner(const CMat& a, const CMat& b);

// Qubit q occupies bit position n-1-q of a basis-state index, so qubit 0 is
// the leftmost tensor factor.
inline int bitpos(int n, int q) { return n - 1 - q; }

// Applies op (2^k x 2^k) to the index bits listed in `bits` of a length-2^B
// vector; bits[j] is the position of matrix-index bit j.
void apply_on_bits(Eigen::Ref<CVec> state, std::span<const int> bits, const CMat& op);

// Column-wise variant for superoperator and multi-state blocks.
void apply_on_bits_cols(Eigen::Ref<CMat> m, std::span<const int> bits, const CMat& op);

// rho <- U_t rho U_t^dagger with u acting on the listed qubits.
void conjugate_on_qubits(Eigen::Ref<CMat> rho, int n, std::span<const int> qubits,
                         const CMat& u);

// rho <- (1-lambda) rho + lambda * (maximally mixed on `qubits`) ox Tr_qubits[rho].
void partial_depolarize(Eigen::Ref<CMat> rho, int n, std::span<const int> qubits,
                        double lambda);

// Embeds u (2^k x 2^k on the listed qubits) into the full 2^n-dimensional space.
CMat embed_unitary(int n, std::span<const int> qubits, const CMat& u);

bool approx_equal(const CMat& a, const CMat& b, double tol);

}  // namespace zerofid
