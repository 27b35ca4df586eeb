#include "zerofid/rb.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <span>

#include "zerofid/errors.hpp"
#include "zerofid/parallel.hpp"

namespace zerofid {

namespace {

// Exact Pauli expectations of the bare SIC states: column i against
// pauli_basis order.  This is the ideal side of every sequence fidelity,
// since a noiseless sequence acts as the identity.
Eigen::MatrixXd sic_pure_expectations(int n) {
  const std::uint64_t count = std::uint64_t{1} << (2 * n);
  const auto states = sic_states(n);
  Eigen::MatrixXd table(count, count);
  for (std::uint64_t i = 0; i < count; ++i)
    table.col(i) = pauli_expectations(states[i].mat);
  return table;
}

DensityMatrix prepared_state(std::uint64_t index, int n, double sigma_deg,
                             RngStream& state_rng) {
  std::vector<std::array<double, 3>> err;
  if (sigma_deg > 0) err = sample_prep_error(n, sigma_deg, state_rng);
  const Circuit prep = prepare_sic(index, n, err.empty() ? nullptr : &err);
  const DensityMatrix ground = DensityMatrix::pure(CVec::Unit(1 << n, 0));
  return run_exact(prep, nullptr, ground);
}

double aggregate_mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double aggregate_std_error(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double var = ss / static_cast<double>(v.size() - 1);
  return std::sqrt(var / static_cast<double>(v.size()));
}

}  // namespace

RBSequence rb_sequence(int n, int m, RngStream& rng, const Circuit* interleave_target) {
  if (m < 1) throw InvalidArgument("sequence length must be at least 1");
  std::optional<CliffordElement> target_tab;
  if (interleave_target) {
    if (interleave_target->n_qubits != n)
      throw InvalidArgument("interleave target does not match qubit count");
    target_tab = tableau_of(*interleave_target);  // Unsupported if not Clifford
  }

  RBSequence seq;
  seq.n_qubits = n;
  seq.length_m = m;
  if (interleave_target) seq.interleave_target = *interleave_target;
  seq.elements.reserve(m);

  CliffordElement word = CliffordElement::identity(n);
  for (int k = 0; k < m; ++k) {
    seq.elements.push_back(random_clifford(n, rng));
    word = compose(seq.elements.back(), word);
    if (target_tab) word = compose(*target_tab, word);
  }
  seq.inverse_element = inverse(word);
  return seq;
}

Circuit sequence_circuit(const RBSequence& seq) {
  Circuit out(seq.n_qubits);
  auto extend = [&out](const Circuit& part) {
    for (const auto& g : part.gates) out.append(g);
  };
  for (const auto& el : seq.elements) {
    extend(clifford_to_circuit(el));
    if (seq.interleave_target) extend(*seq.interleave_target);
  }
  extend(clifford_to_circuit(seq.inverse_element));
  return out;
}

double sequence_zero_fidelity(const RBSequence& seq, const NoiseModel& noise,
                              std::uint64_t shots, RngStream& rng) {
  const int n = seq.n_qubits;
  noise.validate(n);
  const std::uint64_t count = std::uint64_t{1} << (2 * n);
  const Eigen::MatrixXd ideal = sic_pure_expectations(n);
  const Circuit circ = sequence_circuit(seq);
  const auto sites = readout_site_matrices(n, &noise);

  double sum = 0.0;
  for (std::uint64_t i = 0; i < count; ++i) {
    RngStream state_rng = rng.substream(1 + i);
    DensityMatrix rho = prepared_state(i, n, noise.prep_rotation_sigma_deg, state_rng);
    rho = run_exact(circ, &noise, rho);
    if (shots == kExactShots) {
      const CVec adjusted =
          pauli_site_transform(vec(rho.mat), n, std::span<const CMat>(sites));
      sum += ideal.col(i).dot(adjusted.real());
    } else {
      sum += ideal(0, i);  // identity observable reads exactly 1
      for (std::uint64_t j = 1; j < count; ++j) {
        RngStream shot_rng = rng.substream(1 + count + i * count + j);
        sum += ideal(j, i) * measure_pauli_shots(rho, PauliString::from_index(n, j), shots,
                                                 &noise, shot_rng);
      }
    }
  }
  const double raw = sum / std::pow(4.0, n);
  return raw / static_cast<double>(std::uint64_t{1} << n);
}

std::vector<ExperimentPoint> rb_experiment(int n, const std::vector<int>& m_grid,
                                           int l_sequences, const NoiseModel& noise,
                                           std::uint64_t shots, RngStream& rng,
                                           const Circuit* interleave_target, int workers) {
  if (m_grid.empty()) throw InvalidArgument("sequence-length grid is empty");
  if (l_sequences < 1) throw InvalidArgument("need at least one sequence per length");
  noise.validate(n);

  const std::size_t tasks = m_grid.size() * static_cast<std::size_t>(l_sequences);
  std::vector<double> flat(tasks, 0.0);
  parallel_for(tasks, workers, [&](std::size_t t) {
    const int m = m_grid[t / l_sequences];
    RngStream task_rng = rng.task_stream(1 + t);
    const RBSequence seq = rb_sequence(n, m, task_rng, interleave_target);
    flat[t] = sequence_zero_fidelity(seq, noise, shots, task_rng);
  });

  std::vector<ExperimentPoint> points(m_grid.size());
  for (std::size_t g = 0; g < m_grid.size(); ++g) {
    ExperimentPoint& pt = points[g];
    pt.m = m_grid[g];
    pt.values.assign(flat.begin() + g * l_sequences, flat.begin() + (g + 1) * l_sequences);
    pt.mean = aggregate_mean(pt.values);
    pt.std_error = aggregate_std_error(pt.values, pt.mean);
  }
  std::stable_sort(points.begin(), points.end(),
                   [](const ExperimentPoint& a, const ExperimentPoint& b) { return a.m < b.m; });
  return points;
}

Circuit fold_circuit(const Circuit& target, int m) {
  if (m < 0) throw InvalidArgument("fold count must be nonnegative");
  Circuit out = target;
  const Circuit adj = target.adjoint();
  for (int k = 1; k <= m; ++k) {
    const Circuit& copy = (k % 2 == 1) ? adj : target;
    for (const auto& g : copy.gates) out.append(g);
  }
  return out;
}

std::vector<ExperimentPoint> folding_experiment(const Circuit& ideal_target,
                                                const std::vector<int>& m_grid,
                                                const NoiseModel& noise, std::uint64_t shots,
                                                int runs, RngStream& rng, int workers) {
  if (m_grid.empty()) throw InvalidArgument("fold grid is empty");
  if (runs < 1) throw InvalidArgument("need at least one run per fold count");
  const int n = ideal_target.n_qubits;
  noise.validate(n);

  const Channel ideal = unitary_channel(circuit_unitary(ideal_target));
  const std::size_t tasks = m_grid.size() * static_cast<std::size_t>(runs);
  std::vector<double> flat(tasks, 0.0);

  if (shots == kExactShots) {
    const std::uint64_t dim2 = std::uint64_t{1} << (2 * n);
    const Eigen::MatrixXd ideal_table = sic_expectation_table(ideal, n);
    const CMat readout = expectation_transform(n, &noise);
    const CMat step_fwd = circuit_superop(ideal_target, &noise);
    const CMat step_adj = circuit_superop(ideal_target.adjoint(), &noise);

    // Weight matrices P_m = A^T (readout * S_m), one per grid entry, so each
    // run reduces to an elementwise product with its prepared-state matrix.
    std::vector<int> sorted_grid = m_grid;
    std::sort(sorted_grid.begin(), sorted_grid.end());
    std::map<int, CMat> weights;
    CMat folded = step_fwd;
    int built_m = 0;
    for (int m : sorted_grid) {
      if (m < 0) throw InvalidArgument("fold count must be nonnegative");
      while (built_m < m) {
        ++built_m;
        folded = ((built_m % 2 == 1) ? step_adj : step_fwd) * folded;
      }
      if (!weights.count(m))
        weights.emplace(m, ideal_table.cast<cplx>().transpose() * (readout * folded));
    }

    parallel_for(tasks, workers, [&](std::size_t t) {
      const int m = m_grid[t / runs];
      RngStream task_rng = rng.task_stream(1 + t);
      CMat prepared(dim2, dim2);
      for (std::uint64_t i = 0; i < dim2; ++i) {
        RngStream state_rng = task_rng.substream(1 + i);
        prepared.col(i) =
            vec(prepared_state(i, n, noise.prep_rotation_sigma_deg, state_rng).mat);
      }
      const CMat& p_m = weights.at(m);
      const double raw =
          p_m.cwiseProduct(prepared.transpose()).sum().real() / std::pow(4.0, n);
      flat[t] = raw / static_cast<double>(std::uint64_t{1} << n);
    });
  } else {
    parallel_for(tasks, workers, [&](std::size_t t) {
      const int m = m_grid[t / runs];
      RngStream task_rng = rng.task_stream(1 + t);
      const Circuit folded = fold_circuit(ideal_target, m);
      flat[t] = zero_fidelity_shot_estimate(ideal, folded, noise, shots, task_rng).normalized;
    });
  }

  std::vector<ExperimentPoint> points(m_grid.size());
  for (std::size_t g = 0; g < m_grid.size(); ++g) {
    ExperimentPoint& pt = points[g];
    pt.m = m_grid[g];
    pt.values.assign(flat.begin() + g * runs, flat.begin() + (g + 1) * runs);
    pt.mean = aggregate_mean(pt.values);
    pt.std_error = aggregate_std_error(pt.values, pt.mean);
  }
  std::stable_sort(points.begin(), points.end(),
                   [](const ExperimentPoint& a, const ExperimentPoint& b) { return a.m < b.m; });
  return points;
}

namespace {

struct LinearFit {
  double a = 0.0;
  double b = 0.0;
  double sse = 0.0;
};

LinearFit solve_at_p(const std::vector<std::pair<double, double>>& pts, double p) {
  double suu = 0, su = 0, suy = 0, sy = 0;
  const double count = static_cast<double>(pts.size());
  std::vector<double> u(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    u[k] = std::pow(p, pts[k].first);
    suu += u[k] * u[k];
    su += u[k];
    suy += u[k] * pts[k].second;
    sy += pts[k].second;
  }
  auto evaluated = [&](double a, double b) {
    LinearFit fit{a, b, 0.0};
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const double r = pts[k].second - (a * u[k] + b);
      fit.sse += r * r;
    }
    return fit;
  };

  // A0 and B0 absorb preparation and measurement errors, so both live in
  // [0, 1].  Without the box, p -> 1 degenerates into a two-parameter linear
  // family and weakly curved data can pull the solution to huge +-A0/B0.
  const double det = suu * count - su * su;
  if (det > 1e-12 * std::max(1.0, suu * count)) {
    const double a = (count * suy - su * sy) / det;
    const double b = (suu * sy - su * suy) / det;
    if (a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0) return evaluated(a, b);
  }
  // Unconstrained optimum outside the box (or collinear columns): the
  // constrained optimum of the convex quadratic lies on an edge of [0,1]^2.
  auto clamp01 = [](double v) { return std::min(1.0, std::max(0.0, v)); };
  LinearFit best;
  bool have = false;
  for (double a_edge : {0.0, 1.0}) {
    const LinearFit fit = evaluated(a_edge, clamp01((sy - a_edge * su) / count));
    if (!have || fit.sse < best.sse) {
      best = fit;
      have = true;
    }
  }
  for (double b_edge : {0.0, 1.0}) {
    const double a = suu > 0.0 ? clamp01((suy - b_edge * su) / suu) : 0.0;
    const LinearFit fit = evaluated(a, b_edge);
    if (fit.sse < best.sse) best = fit;
  }
  return best;
}

}  // namespace

DecayFit fit_decay(const std::vector<std::pair<double, double>>& points, int n_qubits) {
  std::vector<double> ms;
  double vmin = 0, vmax = 0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    ms.push_back(points[k].first);
    vmin = k == 0 ? points[k].second : std::min(vmin, points[k].second);
    vmax = k == 0 ? points[k].second : std::max(vmax, points[k].second);
  }
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  if (ms.size() < 3)
    throw FitDegenerate("decay fit needs at least 3 distinct sequence lengths");
  const double scale = std::max({1.0, std::abs(vmin), std::abs(vmax)});
  if (vmax - vmin <= 1e-12 * scale)
    throw FitDegenerate("decay fit is degenerate: constant data leaves p unidentifiable");

  auto sse = [&](double p) { return solve_at_p(points, p).sse; };

  double best_p = 0.0, best_sse = sse(0.0);
  constexpr int kGrid = 1000;
  for (int k = 1; k <= kGrid; ++k) {
    const double p = static_cast<double>(k) / kGrid;
    const double s = sse(p);
    if (s < best_sse) {
      best_sse = s;
      best_p = p;
    }
  }

  double lo = std::max(0.0, best_p - 1.0 / kGrid);
  double hi = std::min(1.0, best_p + 1.0 / kGrid);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - invphi * (hi - lo), d = lo + invphi * (hi - lo);
  double fc = sse(c), fd = sse(d);
  while (hi - lo > 1e-9) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = sse(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = sse(d);
    }
  }
  const double p = (lo + hi) / 2.0;
  const LinearFit fit = solve_at_p(points, p);

  DecayFit out;
  out.a0 = fit.a;
  out.p = p;
  out.b0 = fit.b;
  out.rms_residual = std::sqrt(fit.sse / static_cast<double>(points.size()));
  out.n_qubits = n_qubits;
  const double dim = static_cast<double>(std::uint64_t{1} << n_qubits);
  out.f_avg = p + (1.0 - p) / dim;
  out.epc = 1.0 - out.f_avg;
  return out;
}

double interleaved_gate_fidelity(const DecayFit& fit_ref, const DecayFit& fit_int,
                                 int n_qubits) {
  if (!(fit_ref.p > 0.0))
    throw InvalidArgument("reference decay rate must be positive");
  if (fit_ref.p > 1.0 || fit_int.p < 0.0 || fit_int.p > 1.0)
    throw InvalidArgument("decay rates must lie in (0, 1]");
  const double p_gate = fit_int.p / fit_ref.p;
  const double dim = static_cast<double>(std::uint64_t{1} << n_qubits);
  return p_gate + (1.0 - p_gate) / dim;
}

}  // namespace zerofid
