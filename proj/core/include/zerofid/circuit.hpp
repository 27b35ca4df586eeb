#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "zerofid/linalg.hpp"
#include "zerofid/qstate.hpp"
#include "zerofid/rng.hpp"

namespace zerofid {

enum class GateKind { H, S, Sdg, X, Y, Z, CNOT, CZ, U3 };

struct Gate {
  GateKind kind = GateKind::H;
  std::vector<int> targets;
  std::array<double, 3> angles{};  // U3 only: theta, phi, lambda in radians

  int arity() const { return static_cast<int>(targets.size()); }

  static Gate h(int q) { return {GateKind::H, {q}}; }
  static Gate s(int q) { return {GateKind::S, {q}}; }
  static Gate sdg(int q) { return {GateKind::Sdg, {q}}; }
  static Gate x(int q) { return {GateKind::X, {q}}; }
  static Gate y(int q) { return {GateKind::Y, {q}}; }
  static Gate z(int q) { return {GateKind::Z, {q}}; }
  static Gate cnot(int c, int t) { return {GateKind::CNOT, {c, t}}; }
  static Gate cz(int a, int b) { return {GateKind::CZ, {a, b}}; }
  static Gate u3(int q, double theta, double phi, double lambda) {
    return {GateKind::U3, {q}, {theta, phi, lambda}};
  }
};

struct Circuit {
  int n_qubits = 0;
  std::vector<Gate> gates;

  explicit Circuit(int n = 0) : n_qubits(n) {}

  // Validates distinct in-range targets.
  void append(Gate g);

  // Reversed gate order with each gate adjointed; the unitary is the exact
  // dagger of the original.
  Circuit adjoint() const;

  std::size_t size() const { return gates.size(); }

  // Line-oriented text: one gate per line ("CZ 0 1", "U3 0 0.1 0.2 0.3"),
  // optional "qubits N" header, '#' comments.  Angles are radians.
  static Circuit parse(std::string_view text);
  std::string str() const;
};

CMat gate_unitary(const Gate& g);
CMat circuit_unitary(const Circuit& c);

Eigen::Matrix2d readout_weak();
Eigen::Matrix2d readout_strong();

struct NoiseModel {
  // Depolarizing strength attached after every gate, keyed by gate arity.
  std::map<int, double> gate_depolarizing;
  // Per-qubit row-stochastic confusion matrices, entry (true, reported);
  // empty = ideal readout, a single entry is shared by all qubits.
  std::vector<Eigen::Matrix2d> readout;
  // Std dev in degrees of the Gaussian preparation-rotation error.
  double prep_rotation_sigma_deg = 0.0;

  static NoiseModel ideal() { return {}; }
  bool has_readout() const { return !readout.empty(); }
  const Eigen::Matrix2d& confusion(int q) const;
  double lambda_for_arity(int arity) const;
  void validate(int n_qubits) const;
};

struct ShotResult {
  int n_qubits = 0;
  std::uint64_t shots = 0;
  std::map<std::string, std::uint64_t> counts;  // "b0b1..." with qubit 0 first

  std::uint64_t total() const;
};

// Applies each gate unitary, then (when noise is given) the arity-keyed
// depolarizing channel on the gate's qubits.  Readout and preparation-error
// fields are not consumed here.
DensityMatrix run_exact(const Circuit& c, const NoiseModel* noise, const DensityMatrix& rho0);

// Superoperator of run_exact for the given circuit and noise model, built by
// pushing every operator-basis column through the gate kernels.
CMat circuit_superop(const Circuit& c, const NoiseModel* noise);

// Preparation circuit for SIC product state `index` (lexicographic, qubit 0
// most significant digit): one U3 per qubit, then optional per-qubit error
// rotations.
Circuit prepare_sic(std::uint64_t index, int n,
                    const std::vector<std::array<double, 3>>* prep_error);

// Three Euler angles per qubit, i.i.d. Normal(0, sigma_degrees), in radians.
std::vector<std::array<double, 3>> sample_prep_error(int n, double sigma_deg, RngStream& rng);

// Per-qubit basis change: X -> H, Y -> Sdg then H, Z/I -> nothing.
Circuit basis_change_circuit(const PauliString& w);

// Computational-basis sampling; readout errors act as per-qubit classical
// bit flips on each sampled string.
ShotResult sample_bitstrings(const DensityMatrix& rho, std::uint64_t shots,
                             const NoiseModel* noise, RngStream& rng);

// Parity estimator for W over its non-identity positions; the identity
// string returns exactly 1 without consuming randomness.
double measure_pauli_shots(const DensityMatrix& rho, const PauliString& w,
                           std::uint64_t shots, const NoiseModel* noise, RngStream& rng);

double parity_estimate(const ShotResult& r, const PauliString& w);

}  // namespace zerofid
