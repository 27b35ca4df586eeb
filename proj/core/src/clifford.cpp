#include "zerofid/clifford.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

#include "zerofid/errors.hpp"

namespace zerofid {

namespace {

constexpr int kMaxCliffordQubits = 3;

void check_clifford_size(int n) {
  if (n < 1 || n > kMaxCliffordQubits)
    throw Unsupported("Clifford machinery supports 1 to " +
                      std::to_string(kMaxCliffordQubits) + " qubits");
}

int popcnt(std::uint32_t v) { return std::popcount(v); }

// Dense square GF(2) matrix, one word per row, bit c of rows[r] = entry (r, c).
struct BitMat {
  int n = 0;
  std::vector<std::uint64_t> rows;

  explicit BitMat(int n_) : n(n_), rows(n_, 0) {}

  static BitMat identity(int n) {
    BitMat m(n);
    for (int r = 0; r < n; ++r) m.rows[r] = std::uint64_t{1} << r;
    return m;
  }

  bool get(int r, int c) const { return (rows[r] >> c) & 1; }
  void set(int r, int c, bool b) {
    const std::uint64_t m = std::uint64_t{1} << c;
    rows[r] = b ? rows[r] | m : rows[r] & ~m;
  }

  BitMat operator*(const BitMat& o) const {
    BitMat out(n);
    for (int r = 0; r < n; ++r)
      for (int k = 0; k < n; ++k)
        if (get(r, k)) out.rows[r] ^= o.rows[k];
    return out;
  }

  BitMat transposed() const {
    BitMat out(n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) out.set(c, r, get(r, c));
    return out;
  }

  // Inverse of a unit lower-triangular matrix, by forward substitution.
  BitMat inv_lower_triangular() const {
    BitMat out(n);
    for (int r = 0; r < n; ++r) {
      std::uint64_t row = std::uint64_t{1} << r;
      for (int k = 0; k < r; ++k)
        if (get(r, k)) row ^= out.rows[k];
      out.rows[r] = row;
    }
    return out;
  }

  static BitMat from_quadrants(const BitMat& a, const BitMat& b, const BitMat& c,
                               const BitMat& d) {
    const int n = a.n;
    BitMat out(2 * n);
    for (int r = 0; r < n; ++r) {
      out.rows[r] = a.rows[r] | (b.rows[r] << n);
      out.rows[n + r] = c.rows[r] | (d.rows[r] << n);
    }
    return out;
  }
};

// General GF(2) inverse via Gauss-Jordan; throws if singular.
BitMat gf2_inverse(const BitMat& m) {
  const int n = m.n;
  std::vector<std::uint64_t> aug(n);  // bits [0,n) = matrix, [n,2n) = identity
  for (int r = 0; r < n; ++r) aug[r] = m.rows[r] | (std::uint64_t{1} << (n + r));
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if ((aug[r] >> col) & 1) {
        pivot = r;
        break;
      }
    if (pivot < 0) throw InvalidArgument("tableau matrix is singular over GF(2)");
    std::swap(aug[col], aug[pivot]);
    for (int r = 0; r < n; ++r)
      if (r != col && ((aug[r] >> col) & 1)) aug[r] ^= aug[col];
  }
  BitMat out(n);
  for (int r = 0; r < n; ++r) out.rows[r] = aug[r] >> n;
  return out;
}

}  // namespace

CliffordElement CliffordElement::identity(int n) {
  check_clifford_size(n);
  CliffordElement c;
  c.n = n;
  c.images.resize(2 * n);
  for (int k = 0; k < n; ++k) {
    c.images[k].x = std::uint32_t{1} << k;
    c.images[n + k].z = std::uint32_t{1} << k;
  }
  return c;
}

void CliffordElement::append_h(int q) {
  const std::uint32_t m = std::uint32_t{1} << q;
  for (auto& r : images) {
    const bool xq = r.x & m, zq = r.z & m;
    r.sign ^= xq && zq;
    if (xq != zq) {
      r.x ^= m;
      r.z ^= m;
    }
  }
}

void CliffordElement::append_s(int q) {
  const std::uint32_t m = std::uint32_t{1} << q;
  for (auto& r : images) {
    const bool xq = r.x & m, zq = r.z & m;
    r.sign ^= xq && zq;
    if (xq) r.z ^= m;
  }
}

void CliffordElement::append_sdg(int q) {
  const std::uint32_t m = std::uint32_t{1} << q;
  for (auto& r : images) {
    const bool xq = r.x & m, zq = r.z & m;
    r.sign ^= xq && !zq;
    if (xq) r.z ^= m;
  }
}

void CliffordElement::append_x(int q) {
  const std::uint32_t m = std::uint32_t{1} << q;
  for (auto& r : images) r.sign ^= (r.z & m) != 0;
}

void CliffordElement::append_y(int q) {
  const std::uint32_t m = std::uint32_t{1} << q;
  for (auto& r : images) r.sign ^= ((r.x & m) != 0) != ((r.z & m) != 0);
}

void CliffordElement::append_z(int q) {
  const std::uint32_t m = std::uint32_t{1} << q;
  for (auto& r : images) r.sign ^= (r.x & m) != 0;
}

void CliffordElement::append_cnot(int c, int t) {
  const std::uint32_t mc = std::uint32_t{1} << c, mt = std::uint32_t{1} << t;
  for (auto& r : images) {
    const bool xc = r.x & mc, zc = r.z & mc, xt = r.x & mt, zt = r.z & mt;
    r.sign ^= xc && zt && (xt == zc);
    if (xc) r.x ^= mt;
    if (zt) r.z ^= mc;
  }
}

void CliffordElement::append_cz(int a, int b) {
  const std::uint32_t ma = std::uint32_t{1} << a, mb = std::uint32_t{1} << b;
  for (auto& r : images) {
    const bool xa = r.x & ma, za = r.z & ma, xb = r.x & mb, zb = r.z & mb;
    r.sign ^= xa && xb && (za != zb);
    if (xb) r.z ^= ma;
    if (xa) r.z ^= mb;
  }
}

PauliRow CliffordElement::image_of(const PauliRow& p) const {
  std::uint32_t ax = 0, az = 0;
  int t = 0;  // quarter-phase exponent of the raw accumulated term i^t X^ax Z^az
  auto mul_row = [&](const PauliRow& r) {
    t += 2 * (r.sign ? 1 : 0) + popcnt(r.x & r.z);  // row's canonical prefactor
    t += 2 * popcnt(az & r.x);                      // move Z^az past X^{r.x}
    ax ^= r.x;
    az ^= r.z;
  };
  for (int k = 0; k < n; ++k)
    if ((p.x >> k) & 1) mul_row(images[k]);
  for (int k = 0; k < n; ++k)
    if ((p.z >> k) & 1) mul_row(images[n + k]);
  t += 2 * (p.sign ? 1 : 0) + popcnt(p.x & p.z);
  t -= popcnt(ax & az);
  t = ((t % 4) + 4) % 4;
  if (t & 1) throw InvalidArgument("tableau is not symplectic: image has phase i");
  return {ax, az, (t & 2) != 0};
}

CliffordElement compose(const CliffordElement& a, const CliffordElement& b) {
  if (a.n != b.n) throw InvalidArgument("composed elements must have equal size");
  CliffordElement out = a;
  for (int k = 0; k < 2 * a.n; ++k) out.images[k] = a.image_of(b.images[k]);
  return out;
}

CliffordElement inverse(const CliffordElement& c) {
  const int n = c.n, m = 2 * n;
  BitMat mat(m);  // column k = symplectic vector of images[k]
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < n; ++j) {
      mat.set(j, k, (c.images[k].x >> j) & 1);
      mat.set(n + j, k, (c.images[k].z >> j) & 1);
    }
  const BitMat inv = gf2_inverse(mat);
  CliffordElement out = CliffordElement::identity(n);
  for (int k = 0; k < m; ++k) {
    PauliRow row;
    for (int j = 0; j < n; ++j) {
      if (inv.get(j, k)) row.x |= std::uint32_t{1} << j;
      if (inv.get(n + j, k)) row.z |= std::uint32_t{1} << j;
    }
    const PauliRow check = c.image_of(row);
    const PauliRow target = CliffordElement::identity(n).images[k];
    if (check.x != target.x || check.z != target.z)
      throw InvalidArgument("tableau inverse check failed; element is not symplectic");
    row.sign = check.sign;  // flipping the preimage sign cancels a negative image
    out.images[k] = row;
  }
  return out;
}

CliffordElement random_clifford(int n, RngStream& rng) {
  check_clifford_size(n);
  auto rand_bit = [&] { return (rng.next_u64() >> 63) != 0; };

  // Quantum Mallows sample of (Hadamard layer, permutation); Bravyi & Maslov,
  // arXiv:2003.09412.
  std::vector<bool> hada;
  std::vector<int> perm;
  std::vector<int> remaining(n);
  std::iota(remaining.begin(), remaining.end(), 0);
  for (int i = 0; i < n; ++i) {
    const long m = static_cast<long>(remaining.size());
    const double u = rng.uniform();
    const double eps = std::pow(4.0, -static_cast<double>(m));
    long k = static_cast<long>(-std::ceil(std::log2(u + (1.0 - u) * eps)));
    if (k >= 2 * m) k = 2 * m - 1;  // u == 0 tail
    hada.push_back(k < m);
    if (k >= m) k = 2 * m - k - 1;
    perm.push_back(remaining[k]);
    remaining.erase(remaining.begin() + k);
  }

  BitMat symmetric(n);
  for (int col = 0; col < n; ++col) {
    symmetric.set(col, col, rand_bit());
    for (int row = col + 1; row < n; ++row) {
      const bool b = rand_bit();
      symmetric.set(row, col, b);
      symmetric.set(col, row, b);
    }
  }

  BitMat symmetric_m(n);
  for (int col = 0; col < n; ++col) {
    symmetric_m.set(col, col, rand_bit() && hada[col]);
    for (int row = col + 1; row < n; ++row) {
      bool b = hada[row] && hada[col];
      b |= hada[row] > hada[col] && perm[row] < perm[col];
      b |= hada[row] < hada[col] && perm[row] > perm[col];
      b &= rand_bit();
      symmetric_m.set(row, col, b);
      symmetric_m.set(col, row, b);
    }
  }

  BitMat lower = BitMat::identity(n);
  for (int col = 0; col < n; ++col)
    for (int row = col + 1; row < n; ++row) lower.set(row, col, rand_bit());

  BitMat lower_m = BitMat::identity(n);
  for (int col = 0; col < n; ++col)
    for (int row = col + 1; row < n; ++row) {
      bool b = hada[row] < hada[col];
      b |= hada[row] && hada[col] && perm[row] > perm[col];
      b |= !hada[row] && !hada[col] && perm[row] < perm[col];
      b &= rand_bit();
      lower_m.set(row, col, b);
    }

  const BitMat prod = symmetric * lower;
  const BitMat prod_m = symmetric_m * lower_m;
  const BitMat inv = lower.inv_lower_triangular().transposed();
  const BitMat inv_m = lower_m.inv_lower_triangular().transposed();

  const BitMat fused = BitMat::from_quadrants(lower, BitMat(n), prod, inv);
  const BitMat fused_m = BitMat::from_quadrants(lower_m, BitMat(n), prod_m, inv_m);

  BitMat u(2 * n);
  for (int row = 0; row < n; ++row) {
    u.rows[row] = fused.rows[perm[row]];
    u.rows[n + row] = fused.rows[n + perm[row]];
  }
  for (int row = 0; row < n; ++row)
    if (hada[row]) std::swap(u.rows[row], u.rows[n + row]);

  const BitMat raw = fused_m * u;

  CliffordElement out;
  out.n = n;
  out.images.resize(2 * n);
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      if (raw.get(row, col)) out.images[row].x |= std::uint32_t{1} << col;
      if (raw.get(row, col + n)) out.images[row].z |= std::uint32_t{1} << col;
      if (raw.get(row + n, col)) out.images[n + row].x |= std::uint32_t{1} << col;
      if (raw.get(row + n, col + n)) out.images[n + row].z |= std::uint32_t{1} << col;
    }
    out.images[row].sign = rand_bit();
    out.images[n + row].sign = rand_bit();
  }
  return out;
}

Circuit clifford_to_circuit(const CliffordElement& c) {
  check_clifford_size(c.n);
  const int n = c.n;
  CliffordElement t = c;

  // Gates appended here reduce t to the identity; the returned circuit is the
  // reversed, adjointed gate list.
  std::vector<Gate> applied;
  auto h = [&](int q) {
    t.append_h(q);
    applied.push_back(Gate::h(q));
  };
  auto s = [&](int q) {
    t.append_s(q);
    applied.push_back(Gate::s(q));
  };
  auto cnot = [&](int cq, int tq) {
    t.append_cnot(cq, tq);
    applied.push_back(Gate::cnot(cq, tq));
  };

  for (int q = 0; q < n; ++q) {
    // Reduce image(X_q) to +-X_q.  Rows touched live on qubits >= q only:
    // they commute with every already-fixed X_j, Z_j.
    {
      auto row = [&]() -> const PauliRow& { return t.images[q]; };
      auto bit = [&](std::uint32_t v, int j) { return ((v >> j) & 1) != 0; };
      for (int j = 0; j < n; ++j)
        if (bit(row().x, j) && bit(row().z, j)) s(j);
      if (!bit(row().x, q)) {
        if (bit(row().z, q)) {
          h(q);
        } else {
          int src = -1;
          for (int j = 0; j < n && src < 0; ++j)
            if (bit(row().x, j)) src = j;
          if (src < 0) {
            for (int j = 0; j < n && src < 0; ++j)
              if (bit(row().z, j)) {
                h(j);
                src = j;
              }
          }
          cnot(src, q);
        }
      }
      for (int j = 0; j < n; ++j)
        if (j != q && bit(row().x, j)) cnot(q, j);
      for (int j = 0; j < n; ++j)
        if (bit(row().z, j)) {
          h(j);
          cnot(q, j);
        }
    }
    // Reduce image(Z_q) to +-Z_q; its q bit pattern is Y or Z (it anticommutes
    // with X_q), and H(q)S(q)H(q) fixes X_q while sending Y_q to Z_q.
    {
      auto row = [&]() -> const PauliRow& { return t.images[n + q]; };
      auto bit = [&](std::uint32_t v, int j) { return ((v >> j) & 1) != 0; };
      if (bit(row().x, q)) {
        h(q);
        s(q);
        h(q);
      }
      for (int j = 0; j < n; ++j)
        if (j != q && bit(row().x, j)) {
          if (bit(row().z, j)) s(j);
          h(j);
        }
      for (int j = 0; j < n; ++j)
        if (j != q && bit(row().z, j)) cnot(j, q);
    }
  }

  for (int q = 0; q < n; ++q) {
    if (t.images[q].sign) {
      t.append_z(q);
      applied.push_back(Gate::z(q));
    }
    if (t.images[n + q].sign) {
      t.append_x(q);
      applied.push_back(Gate::x(q));
    }
  }
  if (!(t == CliffordElement::identity(n)))
    throw std::logic_error("clifford synthesis failed to reach the identity");

  Circuit out(n);
  for (auto it = applied.rbegin(); it != applied.rend(); ++it) {
    if (it->kind == GateKind::S) {
      // Inverse of S over the {H, S, CNOT} + Pauli gate set.
      out.append(Gate::z(it->targets[0]));
      out.append(Gate::s(it->targets[0]));
    } else {
      out.append(*it);  // H, CNOT and Paulis are involutions
    }
  }
  return out;
}

CliffordElement tableau_of(const Circuit& circ) {
  check_clifford_size(circ.n_qubits);
  CliffordElement t = CliffordElement::identity(circ.n_qubits);
  for (const auto& g : circ.gates) {
    switch (g.kind) {
      case GateKind::H: t.append_h(g.targets[0]); break;
      case GateKind::S: t.append_s(g.targets[0]); break;
      case GateKind::Sdg: t.append_sdg(g.targets[0]); break;
      case GateKind::X: t.append_x(g.targets[0]); break;
      case GateKind::Y: t.append_y(g.targets[0]); break;
      case GateKind::Z: t.append_z(g.targets[0]); break;
      case GateKind::CNOT: t.append_cnot(g.targets[0], g.targets[1]); break;
      case GateKind::CZ: t.append_cz(g.targets[0], g.targets[1]); break;
      case GateKind::U3: throw Unsupported("U3 gates are not Clifford");
    }
  }
  return t;
}

CMat clifford_to_unitary(const CliffordElement& c) {
  return circuit_unitary(clifford_to_circuit(c));
}

}  // namespace zerofid
