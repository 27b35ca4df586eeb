#include "zerofid/linalg.hpp"

#include <vector>

#include "zerofid/errors.hpp"

namespace zerofid {

CVec vec(const CMat& m) {
  return Eigen::Map<const CVec>(m.data(), m.size());
}

CMat unvec(const CVec& v) {
  auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size()) throw InvalidArgument("unvec: length is not a perfect square");
  return Eigen::Map<const CMat>(v.data(), d, d);
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMat dagger(const CMat& m) { return m.adjoint(); }

cplx hs_inner(const CMat& a, const CMat& b) {
  return (a.adjoint() * b).trace();
}

void apply_on_bits(Eigen::Ref<CVec> state, std::span<const int> bits, const CMat& op) {
  const int k = static_cast<int>(bits.size());
  const Eigen::Index K = Eigen::Index{1} << k;
  if (op.rows() != K || op.cols() != K) throw InvalidArgument("apply_on_bits: op size mismatch");
  const Eigen::Index N = state.size();
  Eigen::Index mask = 0;
  for (int b : bits) mask |= Eigen::Index{1} << b;

  std::vector<Eigen::Index> offset(K);
  for (Eigen::Index t = 0; t < K; ++t) {
    Eigen::Index off = 0;
    for (int j = 0; j < k; ++j)
      if (t & (Eigen::Index{1} << j)) off |= Eigen::Index{1} << bits[j];
    offset[t] = off;
  }

  Eigen::VectorXcd in(K), out(K);
  for (Eigen::Index base = 0; base < N; ++base) {
    if (base & mask) continue;
    for (Eigen::Index t = 0; t < K; ++t) in(t) = state(base | offset[t]);
    out.noalias() = op * in;
    for (Eigen::Index t = 0; t < K; ++t) state(base | offset[t]) = out(t);
  }
}

void apply_on_bits_cols(Eigen::Ref<CMat> m, std::span<const int> bits, const CMat& op) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    CVec col = m.col(c);
    apply_on_bits(col, bits, op);
    m.col(c) = col;
  }
}

void conjugate_on_qubits(Eigen::Ref<CMat> rho, int n, std::span<const int> qubits,
                         const CMat& u) {
  const int k = static_cast<int>(qubits.size());
  std::vector<int> row_bits(k), col_bits(k);
  for (int j = 0; j < k; ++j) {
    row_bits[j] = bitpos(n, qubits[j]);
    col_bits[j] = n + bitpos(n, qubits[j]);
  }
  Eigen::Map<CVec> v(rho.data(), rho.size());
  apply_on_bits(v, row_bits, u);
  apply_on_bits(v, col_bits, u.conjugate());
}

void partial_depolarize(Eigen::Ref<CMat> rho, int n, std::span<const int> qubits,
                        double lambda) {
  if (lambda == 0.0) return;
  const int k = static_cast<int>(qubits.size());
  const Eigen::Index K = Eigen::Index{1} << k;
  const Eigen::Index N = Eigen::Index{1} << n;
  Eigen::Index mask = 0;
  for (int q : qubits) mask |= Eigen::Index{1} << bitpos(n, q);

  std::vector<Eigen::Index> offset(K);
  for (Eigen::Index t = 0; t < K; ++t) {
    Eigen::Index off = 0;
    int j = 0;
    for (int q : qubits) {
      if (t & (Eigen::Index{1} << j)) off |= Eigen::Index{1} << bitpos(n, q);
      ++j;
    }
    offset[t] = off;
  }

  for (Eigen::Index br = 0; br < N; ++br) {
    if (br & mask) continue;
    for (Eigen::Index bc = 0; bc < N; ++bc) {
      if (bc & mask) continue;
      cplx s = 0.0;
      for (Eigen::Index t = 0; t < K; ++t) s += rho(br | offset[t], bc | offset[t]);
      s *= lambda / static_cast<double>(K);
      for (Eigen::Index t1 = 0; t1 < K; ++t1)
        for (Eigen::Index t2 = 0; t2 < K; ++t2) {
          cplx v = (1.0 - lambda) * rho(br | offset[t1], bc | offset[t2]);
          if (t1 == t2) v += s;
          rho(br | offset[t1], bc | offset[t2]) = v;
        }
    }
  }
}

CMat embed_unitary(int n, std::span<const int> qubits, const CMat& u) {
  const int k = static_cast<int>(qubits.size());
  const Eigen::Index K = Eigen::Index{1} << k;
  const Eigen::Index N = Eigen::Index{1} << n;
  if (u.rows() != K || u.cols() != K) throw InvalidArgument("embed_unitary: size mismatch");
  Eigen::Index mask = 0;
  for (int q : qubits) mask |= Eigen::Index{1} << bitpos(n, q);
  std::vector<Eigen::Index> offset(K);
  for (Eigen::Index t = 0; t < K; ++t) {
    Eigen::Index off = 0;
    int j = 0;
    for (int q : qubits) {
      if (t & (Eigen::Index{1} << j)) off |= Eigen::Index{1} << bitpos(n, q);
      ++j;
    }
    offset[t] = off;
  }
  CMat full = CMat::Zero(N, N);
  for (Eigen::Index base = 0; base < N; ++base) {
    if (base & mask) continue;
    for (Eigen::Index r = 0; r < K; ++r)
      for (Eigen::Index c = 0; c < K; ++c)
        full(base | offset[r], base | offset[c]) = u(r, c);
  }
  return full;
}

bool approx_equal(const CMat& a, const CMat& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace zerofid
