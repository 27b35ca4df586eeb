#include "zerofid/qstate.hpp"

#include <array>
#include <cmath>

#include "zerofid/errors.hpp"

namespace zerofid {

namespace {

constexpr int kMaxQubits = 8;

void check_n(int n) {
  if (n < 1) throw InvalidArgument("n_qubits must be at least 1");
  if (n > kMaxQubits) throw InvalidArgument("n_qubits above the dense-representation limit of 8");
}

}  // namespace

const CMat& pauli_matrix(Pauli p) {
  static const std::array<CMat, 4> mats = [] {
    std::array<CMat, 4> m;
    const cplx i(0.0, 1.0);
    m[0] = CMat{{1, 0}, {0, 1}};
    m[1] = CMat{{0, 1}, {1, 0}};
    m[2] = CMat{{0, -i}, {i, 0}};
    m[3] = CMat{{1, 0}, {0, -1}};
    return m;
  }();
  return mats[static_cast<int>(p)];
}

int PauliString::weight() const {
  int w = 0;
  for (Pauli p : factors)
    if (p != Pauli::I) ++w;
  return w;
}

bool PauliString::is_identity() const { return weight() == 0; }

PauliString PauliString::from_index(int n, std::uint64_t index) {
  check_n(n);
  if (index >= (std::uint64_t{1} << (2 * n)))
    throw InvalidArgument("PauliString index out of range");
  PauliString w;
  w.factors.resize(n);
  for (int q = 0; q < n; ++q)
    w.factors[q] = static_cast<Pauli>((index >> (2 * bitpos(n, q))) & 3);
  return w;
}

std::uint64_t PauliString::index() const {
  std::uint64_t idx = 0;
  const int n = n_qubits();
  for (int q = 0; q < n; ++q)
    idx |= static_cast<std::uint64_t>(factors[q]) << (2 * bitpos(n, q));
  return idx;
}

PauliString PauliString::parse(std::string_view s) {
  if (s.empty()) throw InvalidArgument("empty Pauli string");
  PauliString w;
  for (char c : s) {
    switch (c) {
      case 'I': w.factors.push_back(Pauli::I); break;
      case 'X': w.factors.push_back(Pauli::X); break;
      case 'Y': w.factors.push_back(Pauli::Y); break;
      case 'Z': w.factors.push_back(Pauli::Z); break;
      default: throw InvalidArgument("invalid Pauli character");
    }
  }
  return w;
}

std::string PauliString::str() const {
  std::string s;
  for (Pauli p : factors) s += "IXYZ"[static_cast<int>(p)];
  return s;
}

CMat PauliString::realize() const {
  CMat m = pauli_matrix(factors[0]);
  for (size_t q = 1; q < factors.size(); ++q) m = kron(m, pauli_matrix(factors[q]));
  return m;
}

std::vector<PauliString> pauli_basis(int n) {
  check_n(n);
  std::vector<PauliString> basis;
  basis.reserve(std::size_t{1} << (2 * n));
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << (2 * n)); ++i)
    basis.push_back(PauliString::from_index(n, i));
  return basis;
}

DensityMatrix DensityMatrix::pure(const CVec& psi) {
  auto dim = psi.size();
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) throw InvalidArgument("ket dimension is not a power of two");
  double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-10) throw InvalidArgument("ket is not normalized");
  return {n, psi * psi.adjoint()};
}

DensityMatrix DensityMatrix::maximally_mixed(int n) {
  check_n(n);
  Eigen::Index d = Eigen::Index{1} << n;
  return {n, CMat::Identity(d, d) / static_cast<double>(d)};
}

void DensityMatrix::validate() const {
  if (mat.rows() != mat.cols() || mat.rows() != (Eigen::Index{1} << n_qubits))
    throw InvalidArgument("density matrix dimension mismatch");
  if ((mat - mat.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw InvalidArgument("density matrix is not Hermitian");
  if (std::abs(mat.trace() - cplx(1.0)) > 1e-10)
    throw InvalidArgument("density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<CMat> es((mat + mat.adjoint()) / 2.0);
  if (es.eigenvalues().minCoeff() < -1e-9)
    throw InvalidArgument("density matrix has a negative eigenvalue");
}

const std::vector<CVec>& sic_kets() {
  static const std::vector<CVec> kets = [] {
    std::vector<CVec> k(4, CVec(2));
    const double a = 1.0 / std::sqrt(3.0);
    const double b = std::sqrt(2.0 / 3.0);
    k[0] << 1.0, 0.0;
    for (int j = 1; j < 4; ++j) {
      double phi = 2.0 * M_PI * (j - 1) / 3.0;
      k[j] << a, b * std::exp(cplx(0.0, phi));
    }
    return k;
  }();
  return kets;
}

std::array<double, 3> sic_prep_angles(int i) {
  if (i < 0 || i > 3) throw InvalidArgument("SIC ket index out of range");
  if (i == 0) return {0.0, 0.0, 0.0};
  double theta = 2.0 * std::acos(1.0 / std::sqrt(3.0));
  double phi = 2.0 * M_PI * (i - 1) / 3.0;
  return {theta, phi, 0.0};
}

std::vector<DensityMatrix> sic_states(int n) {
  check_n(n);
  const auto& kets = sic_kets();
  std::array<CMat, 4> rho1;
  for (int j = 0; j < 4; ++j) rho1[j] = kets[j] * kets[j].adjoint();

  std::size_t count = std::size_t{1} << (2 * n);
  std::vector<DensityMatrix> states;
  states.reserve(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    CMat rho = rho1[(idx >> (2 * (n - 1))) & 3];
    for (int q = 1; q < n; ++q) rho = kron(rho, rho1[(idx >> (2 * (n - 1 - q))) & 3]);
    states.push_back({n, std::move(rho)});
  }
  return states;
}

double expectation(const DensityMatrix& rho, const PauliString& w) {
  if (w.n_qubits() != rho.n_qubits) throw InvalidArgument("expectation: qubit count mismatch");
  if (w.is_identity()) return 1.0;
  const int n = rho.n_qubits;
  const Eigen::Index N = Eigen::Index{1} << n;

  Eigen::Index flip = 0;
  for (int q = 0; q < n; ++q) {
    Pauli p = w.factors[q];
    if (p == Pauli::X || p == Pauli::Y) flip |= Eigen::Index{1} << bitpos(n, q);
  }

  cplx sum = 0.0;
  for (Eigen::Index i = 0; i < N; ++i) {
    // c = <i ^ flip| W |i>
    cplx c = 1.0;
    for (int q = 0; q < n; ++q) {
      int b = (i >> bitpos(n, q)) & 1;
      switch (w.factors[q]) {
        case Pauli::I: break;
        case Pauli::X: break;
        case Pauli::Y: c *= b ? cplx(0.0, -1.0) : cplx(0.0, 1.0); break;
        case Pauli::Z: c *= b ? -1.0 : 1.0; break;
      }
    }
    sum += rho.mat(i, i ^ flip) * c;
  }
  return sum.real();
}

const CMat& pauli_trace_site_matrix() {
  static const CMat t = [] {
    CMat m(4, 4);
    const cplx i(0.0, 1.0);
    // rows I,X,Y,Z against vec components (rho00, rho10, rho01, rho11)
    m << 1, 0, 0, 1,
         0, 1, 1, 0,
         0, -i, i, 0,
         1, 0, 0, -1;
    return m;
  }();
  return t;
}

CVec pauli_site_transform(const CVec& x, int n, std::span<const CMat> site_mats) {
  if (x.size() != (Eigen::Index{1} << (2 * n)))
    throw InvalidArgument("pauli_site_transform: length mismatch");
  if (site_mats.size() != 1 && static_cast<int>(site_mats.size()) != n)
    throw InvalidArgument("pauli_site_transform: need 1 or n site matrices");
  CVec y = x;
  for (int q = 0; q < n; ++q) {
    const CMat& m = site_mats.size() == 1 ? site_mats[0] : site_mats[q];
    int p = bitpos(n, q);
    std::array<int, 2> bits{p, n + p};
    apply_on_bits(y, bits, m);
  }
  CVec out(y.size());
  for (Eigen::Index v = 0; v < y.size(); ++v) {
    Eigen::Index idx = 0;
    for (int p = 0; p < n; ++p) {
      idx |= ((v >> p) & 1) << (2 * p);
      idx |= ((v >> (n + p)) & 1) << (2 * p + 1);
    }
    out(idx) = y(v);
  }
  return out;
}

RVec pauli_expectations(const CMat& rho) {
  int n = 0;
  while ((Eigen::Index{1} << n) < rho.rows()) ++n;
  std::array<CMat, 1> site{pauli_trace_site_matrix()};
  CVec y = pauli_site_transform(vec(rho), n, site);
  return y.real();
}

}  // namespace zerofid
