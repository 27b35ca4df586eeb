#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "zerofid/errors.hpp"
#include "zerofid/qstate.hpp"
#include "zerofid/rng.hpp"

using namespace zerofid;

TEST_CASE("pauli string indexing, parsing, realization") {
  const PauliString w = PauliString::parse("XIZ");
  CHECK(w.n_qubits() == 3);
  CHECK(w.weight() == 2);
  CHECK_FALSE(w.is_identity());
  CHECK(w.str() == "XIZ");
  // qubit 0 is the most significant base-4 digit: X=1, I=0, Z=3.
  CHECK(w.index() == 1 * 16 + 0 * 4 + 3);
  CHECK(PauliString::from_index(3, w.index()) == w);

  const CMat direct = kron(kron(pauli_matrix(Pauli::X), pauli_matrix(Pauli::I)),
                           pauli_matrix(Pauli::Z));
  CHECK(approx_equal(w.realize(), direct, 1e-15));

  CHECK(PauliString::from_index(2, 0).is_identity());
  CHECK_THROWS_AS(PauliString::parse("XQ"), InvalidArgument);
  CHECK_THROWS_AS(PauliString::from_index(2, 16), InvalidArgument);
}

TEST_CASE("pauli basis is orthogonal with norm 2^n") {
  const int n = 2;
  const auto basis = pauli_basis(n);
  REQUIRE(basis.size() == 16);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    CHECK(basis[i].index() == i);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const cplx ip = hs_inner(basis[i].realize(), basis[j].realize());
      const double expect = (i == j) ? 4.0 : 0.0;
      CHECK(std::abs(ip - cplx(expect)) < 1e-12);
    }
  }
}

TEST_CASE("SIC kets form the Bloch tetrahedron") {
  const auto& kets = sic_kets();
  REQUIRE(kets.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(kets[i].norm() - 1.0) < 1e-12);
    for (int j = i + 1; j < 4; ++j) {
      const double overlap = std::norm(kets[i].dot(kets[j]));
      CHECK(std::abs(overlap - 1.0 / 3.0) < 1e-12);
    }
  }

  // ket 0 at the north pole, ket 1 in the xz-plane at cos(theta) = -1/3
  const DensityMatrix rho1 = DensityMatrix::pure(kets[1]);
  CHECK(std::abs(expectation(rho1, PauliString::parse("X")) - 2.0 * std::sqrt(2.0) / 3.0) <
        1e-12);
  CHECK(std::abs(expectation(rho1, PauliString::parse("Y"))) < 1e-12);
  CHECK(std::abs(expectation(rho1, PauliString::parse("Z")) + 1.0 / 3.0) < 1e-12);

  // tetrahedron Bloch vectors sum to zero: sum_i rho_i = 2 I
  CMat sum = CMat::Zero(2, 2);
  for (const auto& k : kets) sum += DensityMatrix::pure(k).mat;
  CHECK(approx_equal(sum, 2.0 * CMat::Identity(2, 2), 1e-12));
}

TEST_CASE("sic_prep_angles prepare the kets") {
  for (int i = 0; i < 4; ++i) {
    const auto [theta, phi, lam] = sic_prep_angles(i);
    // U3 acting on |0>: (cos(theta/2), e^{i phi} sin(theta/2))
    CVec prepared(2);
    prepared << std::cos(theta / 2), std::polar(std::sin(theta / 2), phi);
    const double overlap = std::norm(prepared.dot(sic_kets()[i]));
    CHECK(std::abs(overlap - 1.0) < 1e-12);
    (void)lam;
  }
}

TEST_CASE("sic_states are lexicographic product states") {
  const int n = 2;
  const auto states = sic_states(n);
  REQUIRE(states.size() == 16);
  const auto& kets = sic_kets();
  for (int i = 0; i < 16; ++i) {
    states[i].validate();
    const int d0 = i / 4, d1 = i % 4;  // qubit 0 most significant
    const CMat expect = kron(DensityMatrix::pure(kets[d0]).mat,
                             DensityMatrix::pure(kets[d1]).mat);
    CHECK(approx_equal(states[i].mat, expect, 1e-12));
  }
}

TEST_CASE("density matrix validation") {
  DensityMatrix rho = DensityMatrix::maximally_mixed(2);
  rho.validate();
  rho.mat(0, 0) += 0.1;
  CHECK_THROWS_AS(rho.validate(), InvalidArgument);  // trace off

  DensityMatrix bad = DensityMatrix::maximally_mixed(1);
  bad.mat(0, 1) = 0.7;  // not Hermitian
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);

  DensityMatrix neg = DensityMatrix::maximally_mixed(1);
  neg.mat(0, 0) = -0.2;
  neg.mat(1, 1) = 1.2;
  CHECK_THROWS_AS(neg.validate(), InvalidArgument);
}

TEST_CASE("pauli_expectations agrees with per-string expectation") {
  RngStream rng(9, "qstate");
  const int n = 2;
  CMat g(1 << n, 1 << n);
  for (int j = 0; j < g.cols(); ++j)
    for (int i = 0; i < g.rows(); ++i) g(i, j) = cplx(rng.normal(), rng.normal());
  CMat rho = g * dagger(g);
  rho /= rho.trace();
  const DensityMatrix dm{n, rho};

  const RVec all = pauli_expectations(rho);
  REQUIRE(all.size() == 16);
  const auto basis = pauli_basis(n);
  for (int j = 0; j < 16; ++j)
    CHECK(std::abs(all(j) - expectation(dm, basis[j])) < 1e-10);
}

TEST_CASE("pauli_site_transform with trace matrices reproduces expectations") {
  RngStream rng(10, "qstate");
  const int n = 2;
  CMat g(1 << n, 1 << n);
  for (int j = 0; j < g.cols(); ++j)
    for (int i = 0; i < g.rows(); ++i) g(i, j) = cplx(rng.normal(), rng.normal());
  CMat rho = g * dagger(g);
  rho /= rho.trace();

  const std::array<CMat, 1> shared = {pauli_trace_site_matrix()};
  const CVec out = pauli_site_transform(vec(rho), n, shared);
  const RVec expect = pauli_expectations(rho);
  for (int j = 0; j < 16; ++j) {
    CHECK(std::abs(out(j).real() - expect(j)) < 1e-10);
    CHECK(std::abs(out(j).imag()) < 1e-10);
  }
}
