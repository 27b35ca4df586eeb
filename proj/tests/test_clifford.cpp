#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "zerofid/clifford.hpp"
#include "zerofid/errors.hpp"
#include "zerofid/qstate.hpp"
#include "zerofid/rng.hpp"

using namespace zerofid;

namespace {

// (-1)^sign i^{|x & z|} X^x Z^z, kron'd with qubit 0 leftmost; independent of
// the tableau code paths.
CMat row_matrix(const PauliRow& r, int n) {
  CMat m = CMat::Identity(1, 1);
  int y_count = 0;
  for (int q = 0; q < n; ++q) {
    const bool xb = (r.x >> q) & 1, zb = (r.z >> q) & 1;
    CMat site = CMat::Identity(2, 2);
    if (xb) site = pauli_matrix(Pauli::X) * site;
    if (zb) site = site * pauli_matrix(Pauli::Z);
    m = kron(m, site);
    if (xb && zb) ++y_count;
  }
  cplx phase = 1.0;
  for (int k = 0; k < y_count % 4; ++k) phase *= cplx(0, 1);
  if (r.sign) phase = -phase;
  return phase * m;
}

std::string serialize(const CliffordElement& c) {
  std::string s;
  for (const auto& r : c.images) {
    s += std::to_string(r.x) + ',' + std::to_string(r.z) + ',' + (r.sign ? '1' : '0') + ';';
  }
  return s;
}

CMat h_mat() {
  CMat h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

CMat s_mat() {
  CMat s(2, 2);
  s << 1, 0, 0, cplx(0, 1);
  return s;
}

// control = qubit c, target = qubit t, qubit 0 leftmost in the index.
CMat cnot_mat(int c, int t, int n) {
  const int dim = 1 << n;
  CMat m = CMat::Zero(dim, dim);
  for (int in = 0; in < dim; ++in) {
    const int cb = (in >> (n - 1 - c)) & 1;
    const int out = cb ? in ^ (1 << (n - 1 - t)) : in;
    m(out, in) = 1;
  }
  return m;
}

CMat cz_mat(int a, int b, int n) {
  const int dim = 1 << n;
  CMat m = CMat::Zero(dim, dim);
  for (int in = 0; in < dim; ++in) {
    const int ab = (in >> (n - 1 - a)) & 1, bb = (in >> (n - 1 - b)) & 1;
    m(in, in) = (ab && bb) ? -1 : 1;
  }
  return m;
}

void check_conjugation(const CliffordElement& e, const CMat& u, int n) {
  const std::uint32_t count = 1u << n;
  for (std::uint32_t x = 0; x < count; ++x)
    for (std::uint32_t z = 0; z < count; ++z) {
      const PauliRow p{x, z, false};
      const PauliRow img = e.image_of(p);
      const CMat expect = u * row_matrix(p, n) * dagger(u);
      CHECK(approx_equal(row_matrix(img, n), expect, 1e-12));
    }
}

}  // namespace

TEST_CASE("single-qubit gate conjugation matches matrices") {
  struct Case {
    void (CliffordElement::*append)(int);
    CMat u;
  };
  const CMat x = pauli_matrix(Pauli::X), y = pauli_matrix(Pauli::Y),
             z = pauli_matrix(Pauli::Z);
  const std::vector<Case> cases = {
      {&CliffordElement::append_h, h_mat()},
      {&CliffordElement::append_s, s_mat()},
      {&CliffordElement::append_sdg, dagger(s_mat())},
      {&CliffordElement::append_x, x},
      {&CliffordElement::append_y, y},
      {&CliffordElement::append_z, z},
  };
  for (const auto& c : cases) {
    CliffordElement e = CliffordElement::identity(1);
    (e.*c.append)(0);
    check_conjugation(e, c.u, 1);
  }
  // on qubit 1 of a 2-qubit register
  for (const auto& c : cases) {
    CliffordElement e = CliffordElement::identity(2);
    (e.*c.append)(1);
    check_conjugation(e, kron(CMat::Identity(2, 2), c.u), 2);
  }
}

TEST_CASE("two-qubit gate conjugation matches matrices") {
  {
    CliffordElement e = CliffordElement::identity(2);
    e.append_cnot(0, 1);
    check_conjugation(e, cnot_mat(0, 1, 2), 2);
  }
  {
    CliffordElement e = CliffordElement::identity(2);
    e.append_cnot(1, 0);
    check_conjugation(e, cnot_mat(1, 0, 2), 2);
  }
  {
    CliffordElement e = CliffordElement::identity(2);
    e.append_cz(0, 1);
    check_conjugation(e, cz_mat(0, 1, 2), 2);
  }
  {
    // gate word: CZ(0,1) H(0) CNOT(0,1) S(1)
    CliffordElement e = CliffordElement::identity(2);
    e.append_cz(0, 1);
    e.append_h(0);
    e.append_cnot(0, 1);
    e.append_s(1);
    const CMat u = kron(CMat::Identity(2, 2), s_mat()) * cnot_mat(0, 1, 2) *
                   kron(h_mat(), CMat::Identity(2, 2)) * cz_mat(0, 1, 2);
    check_conjugation(e, u, 2);
  }
}

TEST_CASE("generators close to the full group order") {
  auto bfs_order = [](int n, bool with_cnot) {
    std::set<std::string> seen;
    std::deque<CliffordElement> frontier;
    const CliffordElement id = CliffordElement::identity(n);
    seen.insert(serialize(id));
    frontier.push_back(id);
    while (!frontier.empty()) {
      const CliffordElement cur = frontier.front();
      frontier.pop_front();
      std::vector<CliffordElement> next;
      for (int q = 0; q < n; ++q) {
        CliffordElement h = cur;
        h.append_h(q);
        next.push_back(h);
        CliffordElement s = cur;
        s.append_s(q);
        next.push_back(s);
      }
      if (with_cnot && n == 2) {
        CliffordElement a = cur;
        a.append_cnot(0, 1);
        next.push_back(a);
        CliffordElement b = cur;
        b.append_cnot(1, 0);
        next.push_back(b);
      }
      for (auto& e : next) {
        if (seen.insert(serialize(e)).second) frontier.push_back(std::move(e));
      }
    }
    return seen.size();
  };
  CHECK(bfs_order(1, false) == 24);
  CHECK(bfs_order(2, true) == 11520);
}

TEST_CASE("random_clifford is uniform on the 1-qubit group") {
  RngStream rng(31, "clifford");
  const int per = 10000;
  const int draws = 24 * per;
  std::map<std::string, int> counts;
  for (int i = 0; i < draws; ++i) ++counts[serialize(random_clifford(1, rng))];
  CHECK(counts.size() == 24);
  const double sigma = std::sqrt(draws * (1.0 / 24) * (23.0 / 24));
  for (const auto& [_, c] : counts) CHECK(std::abs(c - per) < 5 * sigma);
}

TEST_CASE("random_clifford covers the 2-qubit group broadly") {
  RngStream rng(32, "clifford");
  std::set<std::string> seen;
  for (int i = 0; i < 20000; ++i) seen.insert(serialize(random_clifford(2, rng)));
  // coupon-collector expectation ~ 11520 (1 - e^{-20000/11520}) ~ 9470
  CHECK(seen.size() > 9000);
  CHECK(seen.size() <= 11520);
}

TEST_CASE("random_clifford size limits") {
  RngStream rng(33, "clifford");
  CHECK_THROWS_AS((void)random_clifford(0, rng), Unsupported);
  CHECK_THROWS_AS((void)random_clifford(4, rng), Unsupported);
}

TEST_CASE("inverse and composition") {
  RngStream rng(34, "clifford");
  for (int n = 1; n <= 3; ++n) {
    const CliffordElement id = CliffordElement::identity(n);
    for (int rep = 0; rep < 50; ++rep) {
      const CliffordElement c = random_clifford(n, rng);
      CHECK(compose(c, inverse(c)) == id);
      CHECK(compose(inverse(c), c) == id);
    }
  }
}

TEST_CASE("compose is a homomorphism up to global phase") {
  RngStream rng(35, "clifford");
  for (int rep = 0; rep < 25; ++rep) {
    const CliffordElement a = random_clifford(2, rng);
    const CliffordElement b = random_clifford(2, rng);
    const CMat ua = clifford_to_unitary(a);
    const CMat ub = clifford_to_unitary(b);
    const CMat uab = clifford_to_unitary(compose(a, b));
    CMat prod = ua * ub;
    // align global phase on the largest entry of uab
    int bi = 0, bj = 0;
    uab.cwiseAbs().maxCoeff(&bi, &bj);
    prod *= uab(bi, bj) / prod(bi, bj);
    CHECK(approx_equal(prod, uab, 1e-9));
  }
}

TEST_CASE("synthesis round-trips the tableau") {
  RngStream rng(36, "clifford");
  for (int n = 1; n <= 3; ++n) {
    for (int rep = 0; rep < 40; ++rep) {
      const CliffordElement c = random_clifford(n, rng);
      const Circuit circ = clifford_to_circuit(c);
      for (const auto& g : circ.gates) {
        const bool allowed = g.kind == GateKind::H || g.kind == GateKind::S ||
                             g.kind == GateKind::CNOT || g.kind == GateKind::X ||
                             g.kind == GateKind::Y || g.kind == GateKind::Z;
        CHECK(allowed);
      }
      CHECK(tableau_of(circ) == c);
    }
  }
}

TEST_CASE("clifford_to_unitary realizes the conjugation action") {
  RngStream rng(37, "clifford");
  for (int rep = 0; rep < 10; ++rep) {
    const CliffordElement c = random_clifford(2, rng);
    check_conjugation(c, clifford_to_unitary(c), 2);
  }
}

TEST_CASE("tableau_of rejects non-Clifford circuits") {
  Circuit circ(1);
  circ.append(Gate::u3(0, 0.3, 0.1, 0.2));
  CHECK_THROWS_AS((void)tableau_of(circ), Unsupported);
}

TEST_CASE("image_of rejects non-symplectic tableaux") {
  CliffordElement bad = CliffordElement::identity(1);
  bad.images[1] = bad.images[0];  // Z image set equal to X image
  CHECK_THROWS_AS((void)bad.image_of(PauliRow{1, 1, false}), InvalidArgument);
}
