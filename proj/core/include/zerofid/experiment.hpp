#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "zerofid/channel.hpp"
#include "zerofid/circuit.hpp"
#include "zerofid/rb.hpp"

namespace zerofid {

enum class ExperimentKind { SingleZeroFidelity, RB, IRB, Folding, TwirlCheck };

ExperimentKind experiment_kind_from_string(const std::string& s);
std::string to_string(ExperimentKind k);

// Parsed experiment description; see README for the JSON schema.  The noise
// block accepts a "spam" preset (none/weak/strong) that fills the readout
// matrices and the preparation-rotation sigma, with explicit keys overriding.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::SingleZeroFidelity;
  int n_qubits = 0;
  NoiseModel noise;
  std::vector<int> m_grid;     // empty selects the kind's default grid
  int l_sequences = 30;        // rb/irb sequences per length
  std::uint64_t shots = 1024;  // kExactShots selects exact expectations
  int runs = 10;               // single/folding repetitions per point
  int samples = 2000;          // twirl_check ensemble size
  std::uint64_t master_seed = 0;
  std::string target_circuit;  // "cz_layer" or a circuit file path
  std::string output_dir = ".";

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::string& path);
  nlohmann::ordered_json to_json() const;
  void validate() const;
  std::vector<int> effective_m_grid() const;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ExperimentPoint> points;
  std::optional<DecayFit> fit;
  std::vector<ExperimentPoint> reference_points;  // irb
  std::optional<DecayFit> reference_fit;          // irb
  std::optional<double> gate_fidelity;            // irb
  std::optional<TwirlReport> twirl;               // twirl_check
};

// Two nearest-neighbor CZ ladder passes, 2(n-1) gates; the layer is its own
// inverse, so the ideal circuit acts as the identity.
Circuit cz_layer(int n);

// Resolves cfg.target_circuit: the builtin name or a circuit text file.
Circuit resolve_target(const ExperimentConfig& cfg);

// Dispatches on cfg.kind.  Deterministic in (config, master_seed) at any
// worker count; all randomness flows from tagged Philox streams.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int workers = 1);

nlohmann::ordered_json fit_to_json(const DecayFit& fit);
nlohmann::ordered_json result_to_json(const ExperimentResult& r);

// Header "m,mean,stderr", every numeric field at 12 significant digits.
std::string points_to_csv(const std::vector<ExperimentPoint>& points);
std::vector<std::pair<double, double>> read_points_csv(std::istream& in);

// Writes result.json and points.csv, plus fit.json when a fit is present
// and reference_points.csv for interleaved runs.  Creates the directory.
void write_result(const ExperimentResult& r, const std::string& output_dir);

}  // namespace zerofid
