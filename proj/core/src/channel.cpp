#include "zerofid/channel.hpp"

#include <cmath>

#include "zerofid/clifford.hpp"
#include "zerofid/errors.hpp"

namespace zerofid {

namespace {

void check_tp(int n, const std::vector<CMat>& ks) {
  Eigen::Index d = Eigen::Index{1} << n;
  CMat acc = CMat::Zero(d, d);
  for (const CMat& a : ks) {
    if (a.rows() != d || a.cols() != d) throw InvalidArgument("Kraus operator dimension mismatch");
    acc += a.adjoint() * a;
  }
  if ((acc - CMat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-9)
    throw InvalidArgument("Kraus set is not trace preserving");
}

CMat superop_from_kraus(const std::vector<CMat>& ks) {
  Eigen::Index d = ks.front().rows();
  CMat s = CMat::Zero(d * d, d * d);
  for (const CMat& a : ks) s += kron(a.conjugate(), a);
  return s;
}

}  // namespace

Channel Channel::from_kraus(int n, std::vector<CMat> ks) {
  if (ks.empty()) throw InvalidArgument("Kraus set is empty");
  check_tp(n, ks);
  Channel c;
  c.n_qubits = n;
  c.superop = superop_from_kraus(ks);
  c.kraus = std::move(ks);
  return c;
}

Channel Channel::from_superop(int n, const CMat& s) {
  Eigen::Index d = Eigen::Index{1} << n;
  if (s.rows() != d * d || s.cols() != d * d)
    throw InvalidArgument("superoperator dimension mismatch");

  // Choi from superop: S[(jo,io),(ji,ii)] = C[(ii,io),(ji,jo)].
  CMat choi(d * d, d * d);
  for (Eigen::Index io = 0; io < d; ++io)
    for (Eigen::Index jo = 0; jo < d; ++jo)
      for (Eigen::Index ii = 0; ii < d; ++ii)
        for (Eigen::Index ji = 0; ji < d; ++ji)
          choi(ii * d + io, ji * d + jo) = s(jo * d + io, ji * d + ii);

  Eigen::SelfAdjointEigenSolver<CMat> es((choi + choi.adjoint()) / 2.0);
  double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() < -1e-9 * scale)
    throw InvalidArgument("superoperator is not completely positive");

  std::vector<CMat> ks;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    double ev = es.eigenvalues()(k);
    if (ev <= 1e-12 * scale) continue;
    ks.push_back(std::sqrt(ev) * unvec(es.eigenvectors().col(k)));
  }
  check_tp(n, ks);
  Channel c;
  c.n_qubits = n;
  c.kraus = std::move(ks);
  c.superop = s;
  return c;
}

Channel identity_channel(int n) {
  Eigen::Index d = Eigen::Index{1} << n;
  return Channel::from_kraus(n, {CMat::Identity(d, d)});
}

Channel unitary_channel(const CMat& u) {
  if (u.rows() != u.cols()) throw InvalidArgument("unitary_channel: matrix is not square");
  int n = 0;
  while ((Eigen::Index{1} << n) < u.rows()) ++n;
  if ((Eigen::Index{1} << n) != u.rows())
    throw InvalidArgument("unitary_channel: dimension is not a power of two");
  if ((u * u.adjoint() - CMat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() > 1e-10)
    throw InvalidArgument("unitary_channel: matrix is not unitary");
  return Channel::from_kraus(n, {u});
}

CMat depolarizing_superop(int n, double p_traceless) {
  Eigen::Index d = Eigen::Index{1} << n;
  CVec vi = vec(CMat::Identity(d, d));
  CMat s = p_traceless * CMat::Identity(d * d, d * d);
  s += ((1.0 - p_traceless) / static_cast<double>(d)) * (vi * vi.adjoint());
  return s;
}

Channel depolarizing(int n, double lambda) {
  if (lambda < 0.0 || lambda > 1.0) throw InvalidArgument("depolarizing: lambda outside [0, 1]");
  if (n < 1 || n > 8) throw InvalidArgument("depolarizing: unsupported qubit count");
  Eigen::Index d = Eigen::Index{1} << n;
  double dd = static_cast<double>(d);
  // Pauli mixture weights: q_I = 1 - lambda + lambda/d^2, q_W = lambda/d^2.
  std::vector<CMat> ks;
  ks.reserve(std::size_t{1} << (2 * n));
  for (const PauliString& w : pauli_basis(n)) {
    double q = lambda / (dd * dd);
    if (w.is_identity()) q += 1.0 - lambda;
    ks.push_back(std::sqrt(q) * w.realize());
  }
  Channel c;
  c.n_qubits = n;
  c.kraus = std::move(ks);
  c.superop = depolarizing_superop(n, 1.0 - lambda);
  return c;
}

Channel compose(const Channel& a, const Channel& b) {
  if (a.n_qubits != b.n_qubits) throw InvalidArgument("compose: qubit count mismatch");
  Eigen::Index d = Eigen::Index{1} << a.n_qubits;
  CMat s = a.superop * b.superop;
  // Keep literal Kraus products while the set stays small, otherwise
  // recanonicalize through the Choi form.
  if (a.kraus.size() * b.kraus.size() <= static_cast<std::size_t>(d * d)) {
    std::vector<CMat> ks;
    ks.reserve(a.kraus.size() * b.kraus.size());
    for (const CMat& ka : a.kraus)
      for (const CMat& kb : b.kraus) ks.push_back(ka * kb);
    Channel c;
    c.n_qubits = a.n_qubits;
    c.kraus = std::move(ks);
    c.superop = std::move(s);
    return c;
  }
  return Channel::from_superop(a.n_qubits, s);
}

Channel power(const Channel& c, int m) {
  if (m < 0) throw InvalidArgument("power: negative exponent");
  Channel acc = identity_channel(c.n_qubits);
  for (int i = 0; i < m; ++i) acc = compose(c, acc);
  return acc;
}

DensityMatrix apply(const Channel& c, const DensityMatrix& rho) {
  if (c.n_qubits != rho.n_qubits) throw InvalidArgument("apply: qubit count mismatch");
  return {rho.n_qubits, unvec(c.superop * vec(rho.mat))};
}

CMat choi_matrix(const Channel& c) {
  Eigen::Index d = Eigen::Index{1} << c.n_qubits;
  CMat choi = CMat::Zero(d * d, d * d);
  for (const CMat& a : c.kraus) {
    CVec v = vec(a);
    choi += v * v.adjoint();
  }
  return choi;
}

CMat haar_random_unitary(int dim, RngStream& rng) {
  if (dim < 1) throw InvalidArgument("haar_random_unitary: dimension must be positive");
  CMat g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i)
      g(i, j) = cplx(rng.normal(), rng.normal()) / std::sqrt(2.0);
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < dim; ++k) {
    cplx rkk = r(k, k);
    cplx phase = std::abs(rkk) > 0 ? rkk / std::abs(rkk) : cplx(1.0);
    q.col(k) *= phase;
  }
  return q;
}

TwirlReport twirl_estimate(const Channel& c, int n_samples, RngStream& rng,
                           TwirlEnsemble ensemble) {
  if (n_samples < 1) throw InvalidArgument("twirl_estimate: need at least one sample");
  const int n = c.n_qubits;
  const Eigen::Index d = Eigen::Index{1} << n;
  const double dim2 = static_cast<double>(d) * static_cast<double>(d);

  CMat avg = CMat::Zero(d * d, d * d);
  for (int s = 0; s < n_samples; ++s) {
    CMat u;
    if (ensemble == TwirlEnsemble::Clifford) {
      CliffordElement g = random_clifford(n, rng);
      u = clifford_to_unitary(g);
    } else {
      u = haar_random_unitary(static_cast<int>(d), rng);
    }
    CMat us = kron(u.conjugate(), u);
    avg += us.adjoint() * c.superop * us;
  }
  avg /= static_cast<double>(n_samples);

  TwirlReport report;
  report.p_formula = (c.superop.trace().real() - 1.0) / (dim2 - 1.0);

  // Slope through the origin of the traceless-part contraction, probed on
  // the SIC product states.
  CMat mixed = CMat::Identity(d, d) / static_cast<double>(d);
  double num = 0.0, den = 0.0;
  for (const DensityMatrix& rho : sic_states(n)) {
    CVec r = vec(CMat(rho.mat - mixed));
    CVec out = avg * vec(rho.mat);
    CVec sdev = out - vec(mixed);
    num += (r.adjoint() * sdev).real()(0);
    den += r.squaredNorm();
  }
  report.p_empirical = num / den;

  report.max_deviation =
      (avg - depolarizing_superop(n, report.p_formula)).cwiseAbs().maxCoeff();
  report.averaged_superop = std::move(avg);
  return report;
}

}  // namespace zerofid
