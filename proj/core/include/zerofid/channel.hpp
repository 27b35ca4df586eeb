#pragma once

#include <vector>

#include "zerofid/linalg.hpp"
#include "zerofid/qstate.hpp"
#include "zerofid/rng.hpp"

namespace zerofid {

// Completely positive trace-preserving map in Kraus form, with the acting
// superoperator cached: apply(c, rho) = unvec(superop * vec(rho)).  With
// column-stacking vectorization the superoperator is sum_k conj(A_k) ox A_k.
struct Channel {
  int n_qubits = 0;
  std::vector<CMat> kraus;
  CMat superop;

  // Validates sum_k A_k^dagger A_k = I to 1e-9.
  static Channel from_kraus(int n, std::vector<CMat> ks);

  // Recovers a canonical Kraus set from the Choi eigendecomposition; input
  // must be CP (Choi eigenvalues >= -1e-9) and TP.
  static Channel from_superop(int n, const CMat& s);
};

Channel identity_channel(int n);
Channel unitary_channel(const CMat& u);

// E(rho) = (1-lambda) rho + lambda Tr[rho] I / 2^n, lambda in [0, 1].
Channel depolarizing(int n, double lambda);

// a after b.
Channel compose(const Channel& a, const Channel& b);
Channel power(const Channel& c, int m);

DensityMatrix apply(const Channel& c, const DensityMatrix& rho);

// Unnormalized Choi matrix sum_k vec(A_k) vec(A_k)^dagger; PSD for CP maps.
CMat choi_matrix(const Channel& c);

CMat depolarizing_superop(int n, double p_traceless);

enum class TwirlEnsemble { Clifford, Haar };

struct TwirlReport {
  double p_formula = 0.0;    // (Tr superop - 1) / (4^n - 1)
  double p_empirical = 0.0;  // regression slope of traceless-part contraction
  double max_deviation = 0.0;
  CMat averaged_superop;
};

// Averages U^dagger Lambda(U . U^dagger) U over random unitaries and compares
// the result against the depolarizing channel with the closed-form p.
TwirlReport twirl_estimate(const Channel& c, int n_samples, RngStream& rng,
                           TwirlEnsemble ensemble = TwirlEnsemble::Clifford);

// Haar-distributed unitary via QR of a Ginibre matrix with phase correction.
CMat haar_random_unitary(int dim, RngStream& rng);

}  // namespace zerofid
