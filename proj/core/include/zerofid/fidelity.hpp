#pragma once

#include <cstdint>
#include <vector>

#include "zerofid/channel.hpp"
#include "zerofid/circuit.hpp"
#include "zerofid/linalg.hpp"
#include "zerofid/qstate.hpp"
#include "zerofid/rng.hpp"

namespace zerofid {

// Fidelities carry the raw convention (noiseless maximum 2^n) next to the
// reported normalized value raw / 2^n.
struct FidelityValue {
  double raw = 0.0;
  double normalized = 0.0;
};

FidelityValue make_fidelity_raw(double raw, int n_qubits);

// Probe states with their Gram matrix B_ij = Tr[rho_i^dag rho_j].  Sets with
// condition number above kMaxStateSetCondition are rejected where B must be
// inverted.
struct StateSet {
  int n_qubits = 0;
  std::vector<DensityMatrix> states;
  CMat gram;
  double condition_number = 0.0;

  static StateSet from_states(std::vector<DensityMatrix> states);
  static StateSet sic(int n_qubits);
};

inline constexpr double kMaxStateSetCondition = 1e8;

// Pauli-basis form: (1/4^n) sum_W Tr[ideal(W)^dag actual(W)].
FidelityValue process_fidelity_pauli(const Channel& ideal, const Channel& actual);

// State form: (1/4^n) sum_ij [B^-1]_ij Tr[ideal(rho_i) actual(rho_j)],
// rescaled to the raw convention.
FidelityValue process_fidelity_states(const Channel& ideal, const Channel& actual,
                                      const StateSet& s);

// Observable form: (1/4^n) sum_il C_il Tr[actual(rho_i) W_l] with
// C_il = sum_j [B^-1]_ji Tr[ideal(rho_j) W_l].
FidelityValue process_fidelity_observable(const Channel& ideal, const Channel& actual,
                                          const StateSet& s);

// Zeroth-order approximation over the 4^n SIC product states:
// (1/4^n) sum_ij Tr[ideal(rho_i) W_j] Tr[actual(rho_i) W_j].
FidelityValue zero_fidelity(const Channel& ideal, const Channel& actual);

// Monte-Carlo zero-fidelity: ideal expectations exact, actual side executed
// as circuits (SIC prep + prep-error rotations + gate noise + basis change +
// readout flips) with `shots` samples per (state, Pauli) setting.  Draws come
// from substreams of `rng`: prep error per state, shot noise per setting.
FidelityValue zero_fidelity_shot_estimate(const Channel& ideal, const Circuit& target_circuit,
                                          const NoiseModel& noise, std::uint64_t shots,
                                          RngStream& rng);

// 4^n x 4^n matrix of exact expectations E(j, i) = Tr[chan(rho_i) W_j] over
// the SIC product states, Paulis in pauli_basis order.
Eigen::MatrixXd sic_expectation_table(const Channel& chan, int n_qubits);

// Per-qubit site matrices mapping (rho_00, rho_10, rho_01, rho_11) to
// readout-adjusted expectations of I, X, Y, Z: confusion folds into the
// observable as beta*W + alpha*I with alpha = e1 - e0, beta = 1 - e0 - e1.
std::vector<CMat> readout_site_matrices(int n_qubits, const NoiseModel* noise);

// Dense kron of the site matrices, for matrix-matrix expectation pipelines.
CMat expectation_transform(int n_qubits, const NoiseModel* noise);

}  // namespace zerofid
