#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "zerofid/channel.hpp"
#include "zerofid/circuit.hpp"
#include "zerofid/errors.hpp"
#include "zerofid/rng.hpp"

using namespace zerofid;

namespace {

Circuit random_circuit(int n, int depth, RngStream& rng, bool with_u3 = true) {
  Circuit c(n);
  for (int d = 0; d < depth; ++d) {
    const int pick = static_cast<int>(rng.uniform_int(with_u3 ? 9 : 8));
    const int q = static_cast<int>(rng.uniform_int(n));
    const int r = n > 1 ? (q + 1 + static_cast<int>(rng.uniform_int(n - 1))) % n : q;
    switch (pick) {
      case 0: c.append(Gate::h(q)); break;
      case 1: c.append(Gate::s(q)); break;
      case 2: c.append(Gate::sdg(q)); break;
      case 3: c.append(Gate::x(q)); break;
      case 4: c.append(Gate::y(q)); break;
      case 5: c.append(Gate::z(q)); break;
      case 6:
        if (n > 1) c.append(Gate::cnot(q, r));
        break;
      case 7:
        if (n > 1) c.append(Gate::cz(q, r));
        break;
      default:
        c.append(Gate::u3(q, rng.uniform() * 3, rng.uniform() * 6, rng.uniform() * 6));
    }
  }
  return c;
}

CMat random_density(int n, RngStream& rng) {
  const int d = 1 << n;
  CMat g(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = cplx(rng.normal(), rng.normal());
  CMat rho = g * dagger(g);
  rho /= rho.trace();
  return rho;
}

// Independent gate-by-gate oracle built from dense embeddings and the
// Pauli-average form of the depolarizing channel.
CMat dense_run(const Circuit& c, const NoiseModel* noise, CMat rho) {
  const int n = c.n_qubits;
  for (const auto& g : c.gates) {
    // gate_unitary puts the first listed target on the most significant index
    // bit; embed_unitary counts qubits LSB-first, so reverse the list.
    const std::vector<int> order(g.targets.rbegin(), g.targets.rend());
    const CMat e = embed_unitary(n, order, gate_unitary(g));
    rho = (e * rho * dagger(e)).eval();
    const double lam = noise ? noise->lambda_for_arity(g.arity()) : 0.0;
    if (lam > 0) {
      const int k = static_cast<int>(g.targets.size());
      CMat avg = CMat::Zero(rho.rows(), rho.cols());
      const auto strings = pauli_basis(k);
      for (const auto& w : strings) {
        const CMat p = embed_unitary(n, order, w.realize());
        avg += p * rho * dagger(p);
      }
      avg /= std::pow(4.0, k);
      rho = ((1 - lam) * rho + lam * avg).eval();
    }
  }
  return rho;
}

}  // namespace

TEST_CASE("gate unitaries are standard") {
  CHECK(approx_equal(gate_unitary(Gate::x(0)), pauli_matrix(Pauli::X), 1e-15));
  CHECK(approx_equal(gate_unitary(Gate::s(0)) * gate_unitary(Gate::sdg(0)),
                     CMat::Identity(2, 2), 1e-15));
  const CMat h = gate_unitary(Gate::h(0));
  CHECK(approx_equal(h * h, CMat::Identity(2, 2), 1e-14));
  CHECK(approx_equal(h * pauli_matrix(Pauli::X) * h, pauli_matrix(Pauli::Z), 1e-14));

  // U3(theta, phi, lambda) columns
  const double th = 0.7, ph = 0.4, lm = 1.1;
  const CMat u = gate_unitary(Gate::u3(0, th, ph, lm));
  CHECK(std::abs(u(0, 0) - cplx(std::cos(th / 2))) < 1e-14);
  CHECK(std::abs(u(1, 0) - std::polar(std::sin(th / 2), ph)) < 1e-14);
  CHECK(std::abs(u(0, 1) + std::polar(std::sin(th / 2), lm)) < 1e-14);
  CHECK(std::abs(u(1, 1) - std::polar(std::cos(th / 2), ph + lm)) < 1e-14);

  // CZ is symmetric and diagonal; CNOT permutes
  CHECK(approx_equal(gate_unitary(Gate::cz(0, 1)), gate_unitary(Gate::cz(1, 0)), 1e-15));
  const CMat cn = gate_unitary(Gate::cnot(0, 1));
  CVec in = CVec::Zero(4);
  in(2) = 1;  // |10>
  CHECK(std::abs((cn * in)(3) - cplx(1)) < 1e-15);
}

TEST_CASE("executed cnot keeps the control on the first listed qubit") {
  Circuit fwd(2), rev(2);
  fwd.append(Gate::cnot(0, 1));
  rev.append(Gate::cnot(1, 0));
  const CMat uf = circuit_unitary(fwd);
  const CMat ur = circuit_unitary(rev);
  CHECK(!approx_equal(uf, ur, 1e-3));
  // |10> (qubit 0 set) flips the target under cnot(0, 1), stays under cnot(1, 0)
  CVec in = CVec::Zero(4);
  in(2) = 1;
  CHECK(std::abs((uf * in)(3) - cplx(1)) < 1e-14);
  CHECK(std::abs((ur * in)(2) - cplx(1)) < 1e-14);
  // density-matrix path agrees: cnot(0, 1) on |10><10| yields |11><11|
  CMat rho = CMat::Zero(4, 4);
  rho(2, 2) = 1;
  const DensityMatrix out = run_exact(fwd, nullptr, DensityMatrix{2, rho});
  CHECK(std::abs(out.mat(3, 3) - cplx(1)) < 1e-14);
}

TEST_CASE("append validates targets") {
  Circuit c(2);
  CHECK_THROWS_AS(c.append(Gate::h(2)), InvalidArgument);
  CHECK_THROWS_AS(c.append(Gate::cnot(0, 0)), InvalidArgument);
  CHECK_THROWS_AS(c.append(Gate::cz(1, -1)), InvalidArgument);
}

TEST_CASE("parse/str round trip") {
  const std::string text = "H 0\nCZ 0 1\nU3 1 0.1 0.2 0.3\nCNOT 1 0\nSDG 0\n";
  const Circuit c = Circuit::parse(text);
  CHECK(c.n_qubits == 2);
  CHECK(c.size() == 5);
  const Circuit back = Circuit::parse(c.str());
  REQUIRE(back.size() == c.size());
  CHECK(approx_equal(circuit_unitary(back), circuit_unitary(c), 1e-15));

  RngStream rng(41, "circuit");
  for (int rep = 0; rep < 5; ++rep) {
    const Circuit r = random_circuit(3, 25, rng);
    const Circuit rt = Circuit::parse(r.str());
    CHECK(approx_equal(circuit_unitary(rt), circuit_unitary(r), 1e-12));
  }

  CHECK_THROWS_AS(Circuit::parse("FOO 0\n"), InvalidArgument);
  CHECK_THROWS_AS(Circuit::parse("H x\n"), InvalidArgument);
  CHECK_THROWS_AS(Circuit::parse("U3 0 1.0\n"), InvalidArgument);
  CHECK_THROWS_AS(Circuit::parse(""), InvalidArgument);
}

TEST_CASE("adjoint reverses the unitary") {
  RngStream rng(42, "circuit");
  for (int rep = 0; rep < 8; ++rep) {
    const Circuit c = random_circuit(2, 15, rng);
    const CMat u = circuit_unitary(c);
    const CMat ua = circuit_unitary(c.adjoint());
    CHECK(approx_equal(ua, dagger(u), 1e-12));
  }
}

TEST_CASE("run_exact matches the dense embedding oracle") {
  RngStream rng(43, "circuit");
  NoiseModel noise;
  noise.gate_depolarizing[1] = 0.02;
  noise.gate_depolarizing[2] = 0.07;
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 1 + static_cast<int>(rng.uniform_int(3));
    const Circuit c = random_circuit(n, 20, rng);
    const CMat rho0 = random_density(n, rng);
    const DensityMatrix out = run_exact(c, &noise, DensityMatrix{n, rho0});
    const CMat expect = dense_run(c, &noise, rho0);
    CHECK(approx_equal(out.mat, expect, 1e-10));
    out.validate();
  }
  // noiseless path
  const Circuit c = random_circuit(2, 12, rng);
  const CMat rho0 = random_density(2, rng);
  CHECK(approx_equal(run_exact(c, nullptr, DensityMatrix{2, rho0}).mat,
                     dense_run(c, nullptr, rho0), 1e-10));
  CHECK_THROWS_AS(run_exact(c, nullptr, DensityMatrix::maximally_mixed(3)), InvalidArgument);
}

TEST_CASE("circuit_superop acts like run_exact") {
  RngStream rng(44, "circuit");
  NoiseModel noise;
  noise.gate_depolarizing[1] = 0.01;
  noise.gate_depolarizing[2] = 0.05;
  const Circuit c = random_circuit(2, 15, rng);
  const CMat s = circuit_superop(c, &noise);
  for (int rep = 0; rep < 4; ++rep) {
    const CMat rho0 = random_density(2, rng);
    const CMat via_super = unvec(s * vec(rho0));
    const CMat via_run = run_exact(c, &noise, DensityMatrix{2, rho0}).mat;
    CHECK(approx_equal(via_super, via_run, 1e-10));
  }
}

TEST_CASE("readout presets and noise model validation") {
  const Eigen::Matrix2d weak = readout_weak();
  CHECK(weak(0, 0) == doctest::Approx(0.997));
  CHECK(weak(0, 1) == doctest::Approx(0.003));
  CHECK(weak(1, 0) == doctest::Approx(0.005));
  CHECK(weak(1, 1) == doctest::Approx(0.995));
  const Eigen::Matrix2d strong = readout_strong();
  CHECK(strong(0, 0) == doctest::Approx(0.97));
  CHECK(strong(1, 1) == doctest::Approx(0.95));

  NoiseModel m;
  m.readout = {weak};
  m.validate(3);  // shared across qubits
  CHECK(&m.confusion(2) == &m.readout[0]);

  m.readout = {weak, strong};
  CHECK_THROWS_AS(m.validate(3), InvalidArgument);  // wrong count
  m.readout = {weak, strong, weak};
  m.validate(3);
  CHECK(&m.confusion(1) == &m.readout[1]);

  NoiseModel bad;
  Eigen::Matrix2d rowsum;
  rowsum << 0.9, 0.2, 0.0, 1.0;
  bad.readout = {rowsum};
  CHECK_THROWS_AS(bad.validate(1), InvalidArgument);

  NoiseModel lam;
  lam.gate_depolarizing[1] = 1.5;
  CHECK_THROWS_AS(lam.validate(1), InvalidArgument);
  NoiseModel sig;
  sig.prep_rotation_sigma_deg = -1.0;
  CHECK_THROWS_AS(sig.validate(1), InvalidArgument);
}

TEST_CASE("prepare_sic produces the indexed product states") {
  const int n = 2;
  const auto states = sic_states(n);
  const DensityMatrix ground = DensityMatrix::pure(CVec::Unit(1 << n, 0));
  for (std::uint64_t i = 0; i < 16; ++i) {
    const Circuit prep = prepare_sic(i, n, nullptr);
    const DensityMatrix out = run_exact(prep, nullptr, ground);
    CHECK(approx_equal(out.mat, states[i].mat, 1e-12));
  }
  CHECK_THROWS_AS(prepare_sic(16, 2, nullptr), InvalidArgument);

  // error rotations change the state but stay normalized
  std::vector<std::array<double, 3>> err = {{0.05, -0.02, 0.01}, {0.0, 0.0, 0.0}};
  const Circuit noisy_prep = prepare_sic(3, n, &err);
  const DensityMatrix noisy = run_exact(noisy_prep, nullptr, ground);
  noisy.validate();
  CHECK_FALSE(approx_equal(noisy.mat, states[3].mat, 1e-6));

  std::vector<std::array<double, 3>> short_err = {{0.1, 0.0, 0.0}};
  CHECK_THROWS_AS(prepare_sic(3, n, &short_err), InvalidArgument);
}

TEST_CASE("sample_prep_error statistics") {
  RngStream rng(45, "circuit");
  CHECK(sample_prep_error(2, 0.0, rng).empty() == false);
  for (const auto& a : sample_prep_error(2, 0.0, rng))
    for (double v : a) CHECK(v == 0.0);

  const double sigma_deg = std::sqrt(5.0);
  const int reps = 4000;
  double sum = 0, sumsq = 0;
  int count = 0;
  for (int i = 0; i < reps; ++i) {
    for (const auto& a : sample_prep_error(1, sigma_deg, rng)) {
      for (double v : a) {
        sum += v;
        sumsq += v * v;
        ++count;
      }
    }
  }
  const double sigma_rad = sigma_deg * M_PI / 180.0;
  const double mean = sum / count;
  CHECK(std::abs(mean) < 4 * sigma_rad / std::sqrt(static_cast<double>(count)));
  CHECK(sumsq / count == doctest::Approx(sigma_rad * sigma_rad).epsilon(0.08));
}

TEST_CASE("measure_pauli_shots basics") {
  RngStream rng(46, "circuit");
  const DensityMatrix zero = DensityMatrix::pure(CVec::Unit(2, 0));

  // deterministic outcomes need no tolerance
  CHECK(measure_pauli_shots(zero, PauliString::parse("Z"), 100, nullptr, rng) == 1.0);
  CHECK(measure_pauli_shots(zero, PauliString::parse("I"), 5, nullptr, rng) == 1.0);
  CHECK_THROWS_AS(
      (void)measure_pauli_shots(zero, PauliString::parse("Z"), 0, nullptr, rng),
      InvalidArgument);

  // weak readout shifts <Z> on |0> to 0.997 - 0.003 = 0.994
  NoiseModel weak;
  weak.readout = {readout_weak()};
  const std::uint64_t shots = 1 << 20;
  const double est = measure_pauli_shots(zero, PauliString::parse("Z"), shots, &weak, rng);
  const double se = std::sqrt(1 - 0.994 * 0.994) / std::sqrt(static_cast<double>(shots));
  CHECK(std::abs(est - 0.994) < 4 * se);

  // X on |+> is +1 up to sampling: exact after the basis change
  CVec plus(2);
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  CHECK(measure_pauli_shots(DensityMatrix::pure(plus), PauliString::parse("X"), 64, nullptr,
                            rng) == 1.0);
}

TEST_CASE("measure_pauli_shots converges to the confusion-adjusted expectation") {
  RngStream rng(47, "circuit");
  // state with nontrivial Y expectation
  CVec psi(2);
  psi << std::cos(0.4), std::polar(std::sin(0.4), 0.9);
  const DensityMatrix rho = DensityMatrix::pure(psi);
  NoiseModel strong;
  strong.readout = {readout_strong()};

  const double exact_y = expectation(rho, PauliString::parse("Y"));
  const double adjusted = 0.92 * exact_y + 0.02;  // beta <W> + alpha
  const std::uint64_t shots = 1 << 20;
  const double est = measure_pauli_shots(rho, PauliString::parse("Y"), shots, &strong, rng);
  CHECK(std::abs(est - adjusted) < 0.004);
}

TEST_CASE("sample_bitstrings counts and determinism") {
  RngStream rng_a(48, "circuit");
  RngStream rng_b(48, "circuit");
  CVec psi(4);
  psi << 0.5, 0.5, 0.5, 0.5;
  const DensityMatrix rho = DensityMatrix::pure(psi);
  const ShotResult a = sample_bitstrings(rho, 500, nullptr, rng_a);
  const ShotResult b = sample_bitstrings(rho, 500, nullptr, rng_b);
  CHECK(a.total() == 500);
  CHECK(a.counts == b.counts);
  for (const auto& [key, _] : a.counts) CHECK(key.size() == 2);
}
