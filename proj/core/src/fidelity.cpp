#include "zerofid/fidelity.hpp"

#include <cmath>
#include <limits>
#include <span>

#include "zerofid/errors.hpp"

namespace zerofid {

namespace {

void check_same_size(const Channel& a, const Channel& b) {
  if (a.n_qubits != b.n_qubits)
    throw InvalidArgument("channels act on different qubit counts");
}

// Exact evaluations of CPTP pairs cannot exceed the raw maximum 2^n; a
// violation indicates a numerical defect, not bad input.
FidelityValue checked_exact(double raw, int n) {
  FidelityValue f = make_fidelity_raw(raw, n);
  if (f.normalized > 1.0 + 1e-6)
    throw std::logic_error("fidelity exceeds its maximum; non-CPTP input?");
  return f;
}

Eigen::PartialPivLU<CMat> gram_factorization(const StateSet& s) {
  if (s.states.empty()) throw InvalidArgument("state set is empty");
  if (!(s.condition_number < kMaxStateSetCondition))
    throw IllConditionedStateSet(
        "state-set Gram matrix is too ill-conditioned to invert (condition " +
            std::to_string(s.condition_number) + ")",
        s.condition_number);
  return Eigen::PartialPivLU<CMat>(s.gram);
}

}  // namespace

FidelityValue make_fidelity_raw(double raw, int n_qubits) {
  return {raw, raw / static_cast<double>(std::uint64_t{1} << n_qubits)};
}

StateSet StateSet::from_states(std::vector<DensityMatrix> states) {
  if (states.empty()) throw InvalidArgument("state set is empty");
  StateSet s;
  s.n_qubits = states[0].n_qubits;
  for (const auto& st : states)
    if (st.n_qubits != s.n_qubits)
      throw InvalidArgument("state set mixes qubit counts");
  s.states = std::move(states);
  const int count = static_cast<int>(s.states.size());
  s.gram.resize(count, count);
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < count; ++j)
      s.gram(i, j) = hs_inner(s.states[i].mat, s.states[j].mat);
  // Gram matrices are Hermitian PSD, so the eigenvalue ratio is the condition
  // number.
  Eigen::SelfAdjointEigenSolver<CMat> es(s.gram);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  s.condition_number =
      lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
  return s;
}

StateSet StateSet::sic(int n_qubits) {
  StateSet s;
  s.n_qubits = n_qubits;
  s.states = sic_states(n_qubits);
  const std::uint64_t count = std::uint64_t{1} << (2 * n_qubits);
  s.gram.resize(count, count);
  // Product structure: B_ij = (1/3)^(base-4 Hamming distance of i, j).
  for (std::uint64_t i = 0; i < count; ++i)
    for (std::uint64_t j = 0; j < count; ++j) {
      int mismatches = 0;
      for (int q = 0; q < n_qubits; ++q) {
        const int shift = 2 * q;
        if (((i >> shift) & 3) != ((j >> shift) & 3)) ++mismatches;
      }
      s.gram(i, j) = std::pow(1.0 / 3.0, mismatches);
    }
  // Single-qubit Gram eigenvalues are {2, 2/3, 2/3, 2/3}; kron gives 3^n.
  s.condition_number = std::pow(3.0, n_qubits);
  return s;
}

FidelityValue process_fidelity_pauli(const Channel& ideal, const Channel& actual) {
  check_same_size(ideal, actual);
  const int n = ideal.n_qubits;
  const std::uint64_t paulis = std::uint64_t{1} << (2 * n);
  double sum = 0.0;
  for (std::uint64_t k = 0; k < paulis; ++k) {
    const CVec w = vec(PauliString::from_index(n, k).realize());
    const CVec a = ideal.superop * w;
    const CVec b = actual.superop * w;
    sum += a.dot(b).real();
  }
  return checked_exact(sum / static_cast<double>(paulis), n);
}

FidelityValue process_fidelity_states(const Channel& ideal, const Channel& actual,
                                      const StateSet& s) {
  check_same_size(ideal, actual);
  if (s.n_qubits != ideal.n_qubits)
    throw InvalidArgument("state set does not match channel size");
  auto lu = gram_factorization(s);
  const int count = static_cast<int>(s.states.size());
  const int n = ideal.n_qubits;

  std::vector<CMat> la(count), ga(count);
  for (int i = 0; i < count; ++i) {
    la[i] = apply(ideal, s.states[i]).mat;
    ga[i] = apply(actual, s.states[i]).mat;
  }
  CMat overlaps(count, count);
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < count; ++j) overlaps(i, j) = (la[i] * ga[j]).trace();

  const CMat binv = lu.inverse();
  const double paulis = std::pow(4.0, n);
  const double literal = (binv.cwiseProduct(overlaps)).sum().real() / paulis;
  // The state form evaluates to raw / 2^n; rescale into the raw convention.
  return checked_exact(literal * static_cast<double>(std::uint64_t{1} << n), n);
}

FidelityValue process_fidelity_observable(const Channel& ideal, const Channel& actual,
                                          const StateSet& s) {
  check_same_size(ideal, actual);
  if (s.n_qubits != ideal.n_qubits)
    throw InvalidArgument("state set does not match channel size");
  auto lu = gram_factorization(s);
  const int n = ideal.n_qubits;
  const int count = static_cast<int>(s.states.size());
  const std::uint64_t paulis = std::uint64_t{1} << (2 * n);

  Eigen::MatrixXd e_ideal(paulis, count), e_actual(paulis, count);
  for (int i = 0; i < count; ++i) {
    e_ideal.col(i) = pauli_expectations(apply(ideal, s.states[i]).mat);
    e_actual.col(i) = pauli_expectations(apply(actual, s.states[i]).mat);
  }
  // C_il = sum_j [B^-1]_ji e_ideal(l, j), so sum_il C_il e_actual(l, i) is
  // the elementwise product of e_ideal B^-1 with e_actual.
  const CMat d = e_ideal.cast<cplx>() * lu.inverse();
  const double literal =
      d.cwiseProduct(e_actual.cast<cplx>()).sum().real() / static_cast<double>(paulis);
  return checked_exact(literal, n);
}

Eigen::MatrixXd sic_expectation_table(const Channel& chan, int n_qubits) {
  if (chan.n_qubits != n_qubits)
    throw InvalidArgument("channel does not match requested qubit count");
  const std::uint64_t count = std::uint64_t{1} << (2 * n_qubits);
  const auto states = sic_states(n_qubits);
  Eigen::MatrixXd table(count, count);
  for (std::uint64_t i = 0; i < count; ++i)
    table.col(i) = pauli_expectations(apply(chan, states[i]).mat);
  return table;
}

FidelityValue zero_fidelity(const Channel& ideal, const Channel& actual) {
  check_same_size(ideal, actual);
  const int n = ideal.n_qubits;
  const Eigen::MatrixXd a = sic_expectation_table(ideal, n);
  const Eigen::MatrixXd b = sic_expectation_table(actual, n);
  const double paulis = std::pow(4.0, n);
  return checked_exact(a.cwiseProduct(b).sum() / paulis, n);
}

std::vector<CMat> readout_site_matrices(int n_qubits, const NoiseModel* noise) {
  const CMat& trace_mat = pauli_trace_site_matrix();
  std::vector<CMat> sites(n_qubits);
  for (int q = 0; q < n_qubits; ++q) {
    if (noise && noise->has_readout()) {
      const Eigen::Matrix2d& m = noise->confusion(q);
      const double e0 = m(0, 1), e1 = m(1, 0);
      const double alpha = e1 - e0, beta = 1.0 - e0 - e1;
      CMat adjust = CMat::Zero(4, 4);
      adjust(0, 0) = 1.0;
      for (int w = 1; w < 4; ++w) {
        adjust(w, w) = beta;
        adjust(w, 0) = alpha;
      }
      sites[q] = adjust * trace_mat;
    } else {
      sites[q] = trace_mat;
    }
  }
  return sites;
}

CMat expectation_transform(int n_qubits, const NoiseModel* noise) {
  const auto sites = readout_site_matrices(n_qubits, noise);
  const std::uint64_t dim = std::uint64_t{1} << (2 * n_qubits);
  CMat t(dim, dim);
  // Columns via the fast per-site kernel so both pipelines share one index
  // convention by construction.
  CVec unit = CVec::Zero(dim);
  for (std::uint64_t c = 0; c < dim; ++c) {
    unit(c) = 1.0;
    t.col(c) = pauli_site_transform(unit, n_qubits, std::span<const CMat>(sites));
    unit(c) = 0.0;
  }
  return t;
}

FidelityValue zero_fidelity_shot_estimate(const Channel& ideal, const Circuit& target_circuit,
                                          const NoiseModel& noise, std::uint64_t shots,
                                          RngStream& rng) {
  const int n = target_circuit.n_qubits;
  if (ideal.n_qubits != n)
    throw InvalidArgument("ideal channel does not match target circuit size");
  if (shots == 0) throw InvalidArgument("shot count must be positive");
  noise.validate(n);

  const Eigen::MatrixXd e_ideal = sic_expectation_table(ideal, n);
  const std::uint64_t count = std::uint64_t{1} << (2 * n);
  const DensityMatrix ground = DensityMatrix::pure(CVec::Unit(1 << n, 0));

  double sum = e_ideal.row(0).sum();  // identity observable contributes exactly 1
  for (std::uint64_t i = 0; i < count; ++i) {
    std::vector<std::array<double, 3>> prep_err;
    if (noise.prep_rotation_sigma_deg > 0) {
      RngStream prep_rng = rng.substream(1 + i);
      prep_err = sample_prep_error(n, noise.prep_rotation_sigma_deg, prep_rng);
    }
    const Circuit prep = prepare_sic(i, n, prep_err.empty() ? nullptr : &prep_err);
    DensityMatrix rho = run_exact(prep, nullptr, ground);
    rho = run_exact(target_circuit, &noise, rho);
    for (std::uint64_t j = 1; j < count; ++j) {
      RngStream shot_rng = rng.substream(1 + count + i * count + j);
      const double actual = measure_pauli_shots(rho, PauliString::from_index(n, j), shots,
                                                &noise, shot_rng);
      sum += e_ideal(j, i) * actual;
    }
  }
  return make_fidelity_raw(sum / std::pow(4.0, n), n);
}

}  // namespace zerofid
