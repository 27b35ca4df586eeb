#include "zerofid/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "zerofid/errors.hpp"
#include "zerofid/version.hpp"

namespace zerofid {

namespace {

constexpr double kPrepSigmaPresetDeg = 2.2360679774997896;  // sqrt(5) degrees

std::string format_sig12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

// A misspelled field silently falling back to a default would change the
// physics of the run, so unknown keys are hard errors.
void reject_unknown_keys(const nlohmann::json& j, const char* scope,
                         std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* name : allowed)
      if (item.key() == name) known = true;
    if (!known)
      throw InvalidArgument(std::string("unknown ") + scope + " field: " + item.key());
  }
}

NoiseModel noise_from_json(const nlohmann::json& j) {
  reject_unknown_keys(j, "noise", {"spam", "gate_depolarizing", "readout",
                                   "prep_rotation_sigma_deg"});
  NoiseModel noise;
  if (j.contains("spam")) {
    const std::string preset = j.at("spam").get<std::string>();
    if (preset == "weak") {
      noise.readout = {readout_weak()};
      noise.prep_rotation_sigma_deg = kPrepSigmaPresetDeg;
    } else if (preset == "strong") {
      noise.readout = {readout_strong()};
      noise.prep_rotation_sigma_deg = kPrepSigmaPresetDeg;
    } else if (preset != "none") {
      throw InvalidArgument("noise.spam must be none, weak or strong");
    }
  }
  if (j.contains("gate_depolarizing")) {
    for (const auto& [key, value] : j.at("gate_depolarizing").items()) {
      std::size_t used = 0;
      int arity = 0;
      try {
        arity = std::stoi(key, &used);
      } catch (const std::exception&) {
        throw InvalidArgument("noise.gate_depolarizing keys must be gate arities");
      }
      if (used != key.size() || arity < 1)
        throw InvalidArgument("noise.gate_depolarizing keys must be gate arities");
      noise.gate_depolarizing[arity] = value.get<double>();
    }
  }
  if (j.contains("readout")) {
    const auto& r = j.at("readout");
    if (r.is_string()) {
      const std::string name = r.get<std::string>();
      if (name == "none")
        noise.readout.clear();
      else if (name == "weak")
        noise.readout = {readout_weak()};
      else if (name == "strong")
        noise.readout = {readout_strong()};
      else
        throw InvalidArgument("noise.readout must be none, weak, strong or matrices");
    } else if (r.is_array()) {
      auto parse_matrix = [](const nlohmann::json& mj) {
        if (!mj.is_array() || mj.size() != 2 || mj[0].size() != 2 || mj[1].size() != 2)
          throw InvalidArgument("readout matrices must be 2x2");
        Eigen::Matrix2d m;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) m(a, b) = mj[a][b].get<double>();
        return m;
      };
      noise.readout.clear();
      const bool single_matrix = r.size() == 2 && r[0].is_array() &&
                                 r[0].size() == 2 && r[0][0].is_number();
      if (single_matrix) {
        noise.readout.push_back(parse_matrix(r));  // one shared matrix
      } else {
        for (const auto& mj : r) noise.readout.push_back(parse_matrix(mj));
      }
    } else {
      throw InvalidArgument("noise.readout must be a preset name or matrices");
    }
  }
  if (j.contains("prep_rotation_sigma_deg"))
    noise.prep_rotation_sigma_deg = j.at("prep_rotation_sigma_deg").get<double>();
  return noise;
}

nlohmann::ordered_json noise_to_json(const NoiseModel& noise) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json dep = nlohmann::ordered_json::object();
  for (const auto& [arity, lam] : noise.gate_depolarizing) dep[std::to_string(arity)] = lam;
  j["gate_depolarizing"] = dep;
  if (noise.has_readout()) {
    nlohmann::ordered_json mats = nlohmann::ordered_json::array();
    for (const auto& m : noise.readout)
      mats.push_back({{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}});
    j["readout"] = mats;
  } else {
    j["readout"] = "none";
  }
  j["prep_rotation_sigma_deg"] = noise.prep_rotation_sigma_deg;
  return j;
}

nlohmann::ordered_json points_to_json(const std::vector<ExperimentPoint>& points) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& pt : points) {
    nlohmann::ordered_json row;
    row["m"] = pt.m;
    row["mean"] = pt.mean;
    row["stderr"] = pt.std_error;
    row["values"] = pt.values;
    arr.push_back(std::move(row));
  }
  return arr;
}

bool needs_target(ExperimentKind kind) {
  return kind != ExperimentKind::RB;
}

}  // namespace

ExperimentKind experiment_kind_from_string(const std::string& s) {
  if (s == "single_zero_fidelity") return ExperimentKind::SingleZeroFidelity;
  if (s == "rb") return ExperimentKind::RB;
  if (s == "irb") return ExperimentKind::IRB;
  if (s == "folding") return ExperimentKind::Folding;
  if (s == "twirl_check") return ExperimentKind::TwirlCheck;
  throw InvalidArgument("unknown experiment kind: " + s);
}

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::SingleZeroFidelity: return "single_zero_fidelity";
    case ExperimentKind::RB: return "rb";
    case ExperimentKind::IRB: return "irb";
    case ExperimentKind::Folding: return "folding";
    case ExperimentKind::TwirlCheck: return "twirl_check";
  }
  throw InvalidArgument("unknown experiment kind");
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  reject_unknown_keys(j, "config",
                      {"kind", "master_seed", "n_qubits", "noise", "m_grid",
                       "l_sequences", "shots", "exact", "runs", "samples",
                       "target_circuit", "output_dir"});
  ExperimentConfig cfg;
  if (!j.contains("kind")) throw InvalidArgument("config field 'kind' is required");
  cfg.kind = experiment_kind_from_string(j.at("kind").get<std::string>());
  if (!j.contains("master_seed"))
    throw InvalidArgument("config field 'master_seed' is required; no environment entropy");
  cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  if (!j.contains("n_qubits")) throw InvalidArgument("config field 'n_qubits' is required");
  cfg.n_qubits = j.at("n_qubits").get<int>();
  if (j.contains("noise")) cfg.noise = noise_from_json(j.at("noise"));
  if (j.contains("m_grid")) cfg.m_grid = j.at("m_grid").get<std::vector<int>>();
  if (j.contains("l_sequences")) cfg.l_sequences = j.at("l_sequences").get<int>();
  if (j.contains("shots")) cfg.shots = j.at("shots").get<std::uint64_t>();
  if (j.contains("exact") && j.at("exact").get<bool>()) cfg.shots = kExactShots;
  if (j.contains("runs")) cfg.runs = j.at("runs").get<int>();
  if (j.contains("samples")) cfg.samples = j.at("samples").get<int>();
  if (j.contains("target_circuit")) cfg.target_circuit = j.at("target_circuit").get<std::string>();
  if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("config parse error: ") + e.what());
  }
  try {
    return from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("config field error: ") + e.what());
  }
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = to_string(kind);
  j["n_qubits"] = n_qubits;
  j["master_seed"] = master_seed;
  j["noise"] = noise_to_json(noise);
  j["m_grid"] = effective_m_grid();
  j["l_sequences"] = l_sequences;
  j["shots"] = shots;
  j["runs"] = runs;
  j["samples"] = samples;
  j["target_circuit"] = target_circuit;
  j["output_dir"] = output_dir;
  return j;
}

std::vector<int> ExperimentConfig::effective_m_grid() const {
  if (kind == ExperimentKind::SingleZeroFidelity || kind == ExperimentKind::TwirlCheck)
    return {0};
  if (!m_grid.empty()) return m_grid;
  std::vector<int> grid;
  if (kind == ExperimentKind::Folding) {
    for (int m = 0; m <= 10; ++m) grid.push_back(m);
  } else {
    for (int m = 1; m <= 20; ++m) grid.push_back(m);
  }
  return grid;
}

void ExperimentConfig::validate() const {
  if (n_qubits < 1) throw InvalidArgument("n_qubits must be at least 1");
  noise.validate(n_qubits);
  if (needs_target(kind) && target_circuit.empty())
    throw InvalidArgument("experiment kind '" + to_string(kind) + "' requires target_circuit");
  switch (kind) {
    case ExperimentKind::RB:
    case ExperimentKind::IRB:
      if (n_qubits > 3)
        throw InvalidArgument("randomized benchmarking supports at most 3 qubits");
      if (l_sequences < 1) throw InvalidArgument("l_sequences must be at least 1");
      for (int m : effective_m_grid())
        if (m < 1) throw InvalidArgument("rb sequence lengths must be at least 1");
      break;
    case ExperimentKind::Folding:
      if (runs < 1) throw InvalidArgument("runs must be at least 1");
      for (int m : effective_m_grid())
        if (m < 0) throw InvalidArgument("fold counts must be nonnegative");
      break;
    case ExperimentKind::SingleZeroFidelity:
      if (runs < 1) throw InvalidArgument("runs must be at least 1");
      break;
    case ExperimentKind::TwirlCheck:
      if (samples < 1) throw InvalidArgument("samples must be at least 1");
      if (n_qubits > 3)
        throw InvalidArgument("Clifford twirl sampling supports at most 3 qubits");
      break;
  }
}

Circuit cz_layer(int n) {
  if (n < 2) throw InvalidArgument("cz_layer needs at least 2 qubits");
  Circuit c(n);
  for (int pass = 0; pass < 2; ++pass)
    for (int q = 0; q + 1 < n; ++q) c.append(Gate::cz(q, q + 1));
  return c;
}

Circuit resolve_target(const ExperimentConfig& cfg) {
  if (cfg.target_circuit == "cz_layer") return cz_layer(cfg.n_qubits);
  std::ifstream in(cfg.target_circuit);
  if (!in) throw InvalidArgument("cannot open target circuit file: " + cfg.target_circuit);
  std::stringstream buf;
  buf << in.rdbuf();
  const Circuit circ = Circuit::parse(buf.str());
  if (circ.n_qubits != cfg.n_qubits)
    throw InvalidArgument("target circuit qubit count does not match n_qubits");
  return circ;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int workers) {
  cfg.validate();
  ExperimentResult result;
  result.config = cfg;
  const std::vector<int> grid = cfg.effective_m_grid();

  switch (cfg.kind) {
    case ExperimentKind::SingleZeroFidelity: {
      const Circuit target = resolve_target(cfg);
      RngStream rng(cfg.master_seed, "single_zero_fidelity");
      result.points =
          folding_experiment(target, {0}, cfg.noise, cfg.shots, cfg.runs, rng, workers);
      break;
    }
    case ExperimentKind::RB: {
      RngStream rng(cfg.master_seed, "rb");
      result.points = rb_experiment(cfg.n_qubits, grid, cfg.l_sequences, cfg.noise,
                                    cfg.shots, rng, nullptr, workers);
      std::vector<std::pair<double, double>> pts;
      for (const auto& p : result.points) pts.emplace_back(p.m, p.mean);
      result.fit = fit_decay(pts, cfg.n_qubits);
      break;
    }
    case ExperimentKind::IRB: {
      const Circuit target = resolve_target(cfg);
      RngStream ref_rng(cfg.master_seed, "irb.reference");
      result.reference_points = rb_experiment(cfg.n_qubits, grid, cfg.l_sequences,
                                              cfg.noise, cfg.shots, ref_rng, nullptr, workers);
      RngStream int_rng(cfg.master_seed, "irb.interleaved");
      result.points = rb_experiment(cfg.n_qubits, grid, cfg.l_sequences, cfg.noise,
                                    cfg.shots, int_rng, &target, workers);
      std::vector<std::pair<double, double>> ref_pts, int_pts;
      for (const auto& p : result.reference_points) ref_pts.emplace_back(p.m, p.mean);
      for (const auto& p : result.points) int_pts.emplace_back(p.m, p.mean);
      result.reference_fit = fit_decay(ref_pts, cfg.n_qubits);
      result.fit = fit_decay(int_pts, cfg.n_qubits);
      result.gate_fidelity =
          interleaved_gate_fidelity(*result.reference_fit, *result.fit, cfg.n_qubits);
      break;
    }
    case ExperimentKind::Folding: {
      const Circuit target = resolve_target(cfg);
      RngStream rng(cfg.master_seed, "folding");
      result.points =
          folding_experiment(target, grid, cfg.noise, cfg.shots, cfg.runs, rng, workers);
      std::vector<std::pair<double, double>> pts;
      for (const auto& p : result.points) pts.emplace_back(p.m, p.mean);
      result.fit = fit_decay(pts, cfg.n_qubits);
      break;
    }
    case ExperimentKind::TwirlCheck: {
      const Circuit target = resolve_target(cfg);
      const Channel chan =
          Channel::from_superop(cfg.n_qubits, circuit_superop(target, &cfg.noise));
      RngStream rng(cfg.master_seed, "twirl_check");
      result.twirl = twirl_estimate(chan, cfg.samples, rng, TwirlEnsemble::Clifford);
      ExperimentPoint pt;
      pt.m = 0.0;
      pt.mean = result.twirl->p_empirical;
      pt.std_error = 0.0;
      pt.values = {result.twirl->p_empirical};
      result.points = {pt};
      break;
    }
  }
  return result;
}

nlohmann::ordered_json fit_to_json(const DecayFit& fit) {
  nlohmann::ordered_json j;
  j["a0"] = fit.a0;
  j["p"] = fit.p;
  j["b0"] = fit.b0;
  j["rms_residual"] = fit.rms_residual;
  j["n_qubits"] = fit.n_qubits;
  j["f_avg"] = fit.f_avg;
  j["epc"] = fit.epc;
  return j;
}

nlohmann::ordered_json result_to_json(const ExperimentResult& r) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["config"] = r.config.to_json();
  j["points"] = points_to_json(r.points);
  if (r.fit) j["fit"] = fit_to_json(*r.fit);
  if (!r.reference_points.empty()) j["reference_points"] = points_to_json(r.reference_points);
  if (r.reference_fit) j["reference_fit"] = fit_to_json(*r.reference_fit);
  if (r.gate_fidelity) j["gate_fidelity"] = *r.gate_fidelity;
  if (r.twirl) {
    nlohmann::ordered_json t;
    t["p_formula"] = r.twirl->p_formula;
    t["p_empirical"] = r.twirl->p_empirical;
    t["max_deviation"] = r.twirl->max_deviation;
    j["twirl"] = t;
  }
  return j;
}

std::string points_to_csv(const std::vector<ExperimentPoint>& points) {
  std::string out = "m,mean,stderr\n";
  for (const auto& pt : points) {
    out += format_sig12(pt.m);
    out += ',';
    out += format_sig12(pt.mean);
    out += ',';
    out += format_sig12(pt.std_error);
    out += '\n';
  }
  return out;
}

std::vector<std::pair<double, double>> read_points_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("points CSV is empty");
  auto strip = [](std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
    std::size_t b = 0;
    while (b < s.size() && (s[b] == ' ' || s[b] == '\t')) ++b;
    return s.substr(b);
  };
  if (strip(line) != "m,mean,stderr")
    throw InvalidArgument("points CSV must start with header 'm,mean,stderr'");
  std::vector<std::pair<double, double>> points;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = strip(line);
    if (row.empty()) continue;
    double m = 0, mean = 0, se = 0;
    char tail = 0;
    const int got = std::sscanf(row.c_str(), "%lf,%lf,%lf%c", &m, &mean, &se, &tail);
    if (got != 3)
      throw InvalidArgument("points CSV line " + std::to_string(line_no) + " is malformed");
    points.emplace_back(m, mean);
  }
  if (points.empty()) throw InvalidArgument("points CSV has no data rows");
  return points;
}

void write_result(const ExperimentResult& r, const std::string& output_dir) {
  namespace fs = std::filesystem;
  const fs::path dir(output_dir);
  fs::create_directories(dir);
  auto write_file = [&dir](const std::string& name, const std::string& body) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write output file: " + (dir / name).string());
    out << body;
  };
  write_file("result.json", result_to_json(r).dump(2) + "\n");
  write_file("points.csv", points_to_csv(r.points));
  if (r.fit) write_file("fit.json", fit_to_json(*r.fit).dump(2) + "\n");
  if (!r.reference_points.empty())
    write_file("reference_points.csv", points_to_csv(r.reference_points));
}

}  // namespace zerofid
