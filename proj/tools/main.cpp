#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zerofid/errors.hpp"
#include "zerofid/experiment.hpp"
#include "zerofid/parallel.hpp"
#include "zerofid/version.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

void print_points(const std::vector<zerofid::ExperimentPoint>& points) {
  std::printf("%6s  %14s  %14s\n", "m", "mean", "stderr");
  for (const auto& pt : points)
    std::printf("%6g  %14.10f  %14.10f\n", pt.m, pt.mean, pt.std_error);
}

void print_fit(const char* label, const zerofid::DecayFit& fit) {
  std::printf("%s: A0=%.10f  p=%.10f  B0=%.10f  F_avg=%.10f  EPC=%.6e  rms_residual=%.6e\n",
              label, fit.a0, fit.p, fit.b0, fit.f_avg, fit.epc, fit.rms_residual);
}

int cmd_run(const std::string& config_path, int workers, const std::string& output_dir) {
  zerofid::ExperimentConfig cfg = zerofid::ExperimentConfig::load(config_path);
  if (!output_dir.empty()) cfg.output_dir = output_dir;
  if (workers <= 0) workers = zerofid::default_workers();

  const auto t0 = std::chrono::steady_clock::now();
  const zerofid::ExperimentResult result = zerofid::run_experiment(cfg, workers);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  zerofid::write_result(result, cfg.output_dir);
  // Timing lives outside result.json so re-runs stay byte-identical.
  std::ofstream log(std::filesystem::path(cfg.output_dir) / "run.log", std::ios::binary);
  log << "kind=" << to_string(cfg.kind) << "\nworkers=" << workers
      << "\nwall_clock_seconds=" << seconds << "\n";

  std::printf("kind=%s  n_qubits=%d  seed=%llu  workers=%d\n", to_string(cfg.kind).c_str(),
              cfg.n_qubits, static_cast<unsigned long long>(cfg.master_seed), workers);
  print_points(result.points);
  if (result.reference_fit) print_fit("reference fit", *result.reference_fit);
  if (result.fit) print_fit(result.reference_fit ? "interleaved fit" : "fit", *result.fit);
  if (result.gate_fidelity) std::printf("interleaved gate fidelity: %.10f\n", *result.gate_fidelity);
  if (result.twirl)
    std::printf("twirl: p_formula=%.10f  p_empirical=%.10f  max_deviation=%.3e\n",
                result.twirl->p_formula, result.twirl->p_empirical,
                result.twirl->max_deviation);
  std::printf("wrote %s (%.2f s)\n", cfg.output_dir.c_str(), seconds);
  return 0;
}

int cmd_fit(const std::string& csv_path, int n_qubits, const std::string& output_dir) {
  std::ifstream in(csv_path);
  if (!in) throw zerofid::InvalidArgument("cannot open points CSV: " + csv_path);
  const auto points = zerofid::read_points_csv(in);
  const zerofid::DecayFit fit = zerofid::fit_decay(points, n_qubits);
  print_fit("fit", fit);

  namespace fs = std::filesystem;
  const fs::path dir = output_dir.empty() ? fs::path(".") : fs::path(output_dir);
  fs::create_directories(dir);
  std::ofstream out(dir / "fit.json", std::ios::binary);
  if (!out) throw zerofid::InvalidArgument("cannot write fit.json in " + dir.string());
  out << zerofid::fit_to_json(fit).dump(2) << "\n";
  return 0;
}

int cmd_report(const std::vector<std::string>& dirs) {
  struct Row {
    std::string dir;
    double p, f_avg, epc;
  };
  std::vector<Row> rows;
  for (const auto& dir : dirs) {
    const auto path = std::filesystem::path(dir) / "result.json";
    std::ifstream in(path);
    if (!in) throw zerofid::InvalidArgument("missing result.json in " + dir);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw zerofid::InvalidArgument(path.string() + " is not valid JSON: " + e.what());
    }
    if (!j.contains("fit"))
      throw zerofid::InvalidArgument(path.string() + " has no fit record to report");
    rows.push_back({dir, j["fit"]["p"].get<double>(), j["fit"]["f_avg"].get<double>(),
                    j["fit"]["epc"].get<double>()});
  }

  std::size_t width = 9;
  for (const auto& r : rows) width = std::max(width, r.dir.size());
  std::printf("%-*s  %12s  %12s  %12s\n", static_cast<int>(width), "directory", "p", "F_avg",
              "EPC");
  for (const auto& r : rows)
    std::printf("%-*s  %12.6f  %12.6f  %12.6f\n", static_cast<int>(width), r.dir.c_str(), r.p,
                r.f_avg, r.epc);

  if (rows.size() > 1) {
    double max_dp = 0.0;
    for (std::size_t a = 0; a < rows.size(); ++a)
      for (std::size_t b = a + 1; b < rows.size(); ++b)
        max_dp = std::max(max_dp, std::abs(rows[a].p - rows[b].p));
    std::printf("max |dp| = %.6f (threshold 0.005)\n", max_dp);
    std::printf("SPAM-invariant: %s\n", max_dp <= 0.005 ? "yes" : "no");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zero-fidelity benchmarking toolkit"};
  app.set_version_flag("--version", zerofid::kVersion);
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "execute an experiment config");
  std::string config_path;
  int workers = 0;
  std::string output_dir;
  run->add_option("config", config_path, "experiment config (JSON)")->required();
  run->add_option("-w,--workers", workers, "worker threads (default: hardware parallelism)");
  run->add_option("--output-dir", output_dir, "override the config's output_dir");

  auto* fit = app.add_subcommand("fit", "fit F(m) = A0 p^m + B0 to a points CSV");
  std::string csv_path;
  int n_qubits = 0;
  std::string fit_output_dir;
  fit->add_option("csv", csv_path, "points CSV with header m,mean,stderr")->required();
  fit->add_option("-n,--n-qubits", n_qubits, "qubit count (for F_avg and EPC)")->required();
  fit->add_option("--output-dir", fit_output_dir, "where to write fit.json (default: .)");

  auto* report = app.add_subcommand("report", "compare fitted decays across result dirs");
  std::vector<std::string> dirs;
  report->add_option("dirs", dirs, "result directories")->required()->expected(-1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, workers, output_dir);
    if (fit->parsed()) return cmd_fit(csv_path, n_qubits, fit_output_dir);
    return cmd_report(dirs);
  } catch (const zerofid::FitDegenerate& e) {
    std::fprintf(stderr, "error: degenerate decay: %s\n", e.what());
    return kExitRuntime;
  } catch (const zerofid::InvalidArgument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
}
