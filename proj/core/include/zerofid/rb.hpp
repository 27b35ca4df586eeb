#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "zerofid/circuit.hpp"
#include "zerofid/clifford.hpp"
#include "zerofid/fidelity.hpp"
#include "zerofid/rng.hpp"

namespace zerofid {

// Shot count value selecting exact expectation evaluation instead of
// sampling.
inline constexpr std::uint64_t kExactShots = 0;

struct RBSequence {
  int n_qubits = 0;
  int length_m = 0;
  std::vector<CliffordElement> elements;
  // Target circuit inserted after every element (interleaved benchmarking).
  std::optional<Circuit> interleave_target;
  // Inverts the full ideal word, interleaved targets included.
  CliffordElement inverse_element;
};

struct ExperimentPoint {
  double m = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  std::vector<double> values;  // one normalized fidelity per sequence/run
};

struct DecayFit {
  double a0 = 0.0;
  double p = 0.0;
  double b0 = 0.0;
  double rms_residual = 0.0;
  int n_qubits = 0;
  double f_avg = 0.0;  // p + (1-p)/2^n
  double epc = 0.0;    // 1 - f_avg
};

RBSequence rb_sequence(int n, int m, RngStream& rng,
                       const Circuit* interleave_target = nullptr);

// Gate-level compilation: each element synthesized, interleaved target gates
// inserted verbatim, inversion element appended last.
Circuit sequence_circuit(const RBSequence& seq);

// Normalized zero-fidelity of the executed sequence against the identity
// (its noiseless action).  shots == kExactShots evaluates expectations
// exactly; otherwise each (state, Pauli) setting is sampled.  Preparation
// error is drawn once per state from substreams of `rng`.
double sequence_zero_fidelity(const RBSequence& seq, const NoiseModel& noise,
                              std::uint64_t shots, RngStream& rng);

// L independent sequences per m; rows sorted by m.  Tasks draw from
// rng.task_stream(1 + task) so results are identical at any worker count.
std::vector<ExperimentPoint> rb_experiment(int n, const std::vector<int>& m_grid,
                                           int l_sequences, const NoiseModel& noise,
                                           std::uint64_t shots, RngStream& rng,
                                           const Circuit* interleave_target = nullptr,
                                           int workers = 1);

// Target followed by m alternating copies (adjoint, forward, ...); the ideal
// composition equals the bare target for even m and for any m when the
// target composes to the identity (the CZ-layer benchmarks do).
Circuit fold_circuit(const Circuit& target, int m);

// Zero-fidelity of the ideal single target against its noisy m-fold
// execution, `runs` repetitions per grid point.
std::vector<ExperimentPoint> folding_experiment(const Circuit& ideal_target,
                                                const std::vector<int>& m_grid,
                                                const NoiseModel& noise, std::uint64_t shots,
                                                int runs, RngStream& rng, int workers = 1);

// Separable least squares for F(m) = A0 p^m + B0 with p constrained to
// [0, 1]: coarse grid then golden-section refinement (1e-9 on p), linear
// solve for (A0, B0) at each p, box-constrained to [0, 1] each since both
// coefficients absorb SPAM.  Deterministic.
DecayFit fit_decay(const std::vector<std::pair<double, double>>& points, int n_qubits);

// Standard interleaved extraction: p_gate = p_int / p_ref, returned as
// p_gate + (1 - p_gate)/2^n.
double interleaved_gate_fidelity(const DecayFit& fit_ref, const DecayFit& fit_int,
                                 int n_qubits);

}  // namespace zerofid
