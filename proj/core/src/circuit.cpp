#include "zerofid/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "zerofid/errors.hpp"

namespace zerofid {

namespace {

const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::Sdg: return "SDG";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CZ: return "CZ";
    case GateKind::U3: return "U3";
  }
  throw InvalidArgument("unknown gate kind");
}

std::string fmt_angle(double a) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", a);
  return buf;
}

// gate_unitary writes matrices with the first listed target on the most
// significant index bit, while the embedding kernels number qubits from the
// least significant bit.  Reversing the target list converts between the two.
std::vector<int> embed_order(const std::vector<int>& targets) {
  return {targets.rbegin(), targets.rend()};
}

}  // namespace

void Circuit::append(Gate g) {
  const int expected = g.kind == GateKind::CNOT || g.kind == GateKind::CZ ? 2 : 1;
  if (g.arity() != expected)
    throw InvalidArgument(std::string(gate_name(g.kind)) + ": expected " +
                          std::to_string(expected) + " target(s)");
  for (int q : g.targets)
    if (q < 0 || q >= n_qubits)
      throw InvalidArgument("gate target " + std::to_string(q) + " out of range for " +
                            std::to_string(n_qubits) + " qubits");
  if (expected == 2 && g.targets[0] == g.targets[1])
    throw InvalidArgument("two-qubit gate targets must be distinct");
  gates.push_back(std::move(g));
}

Circuit Circuit::adjoint() const {
  Circuit out(n_qubits);
  out.gates.reserve(gates.size());
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    Gate g = *it;
    switch (g.kind) {
      case GateKind::S: g.kind = GateKind::Sdg; break;
      case GateKind::Sdg: g.kind = GateKind::S; break;
      case GateKind::U3:
        // U3(t,p,l)^dag = U3(-t,-l,-p), exactly (phases included).
        g.angles = {-g.angles[0], -g.angles[2], -g.angles[1]};
        break;
      default: break;  // H, Paulis, CNOT, CZ are self-adjoint
    }
    out.gates.push_back(std::move(g));
  }
  return out;
}

Circuit Circuit::parse(std::string_view text) {
  struct Line {
    GateKind kind;
    std::vector<int> targets;
    std::array<double, 3> angles{};
  };
  std::vector<Line> lines;
  int declared_n = -1;
  int max_target = -1;

  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string tok;
    if (!(ls >> tok)) continue;
    std::string upper(tok);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return std::toupper(c); });

    auto fail = [&](const std::string& msg) -> InvalidArgument {
      return InvalidArgument("circuit line " + std::to_string(lineno) + ": " + msg);
    };
    auto read_int = [&]() {
      long v;
      if (!(ls >> v) || v < 0) throw fail("expected a nonnegative integer");
      return static_cast<int>(v);
    };
    auto read_double = [&]() {
      double v;
      if (!(ls >> v)) throw fail("expected a number");
      return v;
    };
    auto end_of_line = [&]() {
      std::string extra;
      if (ls >> extra) throw fail("trailing token '" + extra + "'");
    };

    if (upper == "QUBITS") {
      if (declared_n >= 0 || !lines.empty()) throw fail("qubits header must come first");
      declared_n = read_int();
      if (declared_n < 1) throw fail("qubit count must be positive");
      end_of_line();
      continue;
    }

    Line g;
    if (upper == "H") g.kind = GateKind::H;
    else if (upper == "S") g.kind = GateKind::S;
    else if (upper == "SDG") g.kind = GateKind::Sdg;
    else if (upper == "X") g.kind = GateKind::X;
    else if (upper == "Y") g.kind = GateKind::Y;
    else if (upper == "Z") g.kind = GateKind::Z;
    else if (upper == "CNOT" || upper == "CX") g.kind = GateKind::CNOT;
    else if (upper == "CZ") g.kind = GateKind::CZ;
    else if (upper == "U3") g.kind = GateKind::U3;
    else throw fail("unknown gate '" + tok + "'");

    const int ntarg = g.kind == GateKind::CNOT || g.kind == GateKind::CZ ? 2 : 1;
    for (int i = 0; i < ntarg; ++i) g.targets.push_back(read_int());
    if (g.kind == GateKind::U3)
      for (int i = 0; i < 3; ++i) g.angles[i] = read_double();
    end_of_line();
    for (int q : g.targets) max_target = std::max(max_target, q);
    lines.push_back(std::move(g));
  }

  int n = declared_n >= 0 ? declared_n : max_target + 1;
  if (n < 1) throw InvalidArgument("circuit text declares no qubits and no gates");
  Circuit c(n);
  for (auto& g : lines) c.append(Gate{g.kind, std::move(g.targets), g.angles});
  return c;
}

std::string Circuit::str() const {
  std::string out = "qubits " + std::to_string(n_qubits) + "\n";
  for (const auto& g : gates) {
    out += gate_name(g.kind);
    for (int q : g.targets) out += ' ' + std::to_string(q);
    if (g.kind == GateKind::U3)
      for (double a : g.angles) out += ' ' + fmt_angle(a);
    out += '\n';
  }
  return out;
}

CMat gate_unitary(const Gate& g) {
  using std::numbers::sqrt2;
  const cplx i1(0.0, 1.0);
  switch (g.kind) {
    case GateKind::H: {
      CMat u(2, 2);
      u << 1, 1, 1, -1;
      return u / sqrt2;
    }
    case GateKind::S: {
      CMat u = CMat::Zero(2, 2);
      u(0, 0) = 1;
      u(1, 1) = i1;
      return u;
    }
    case GateKind::Sdg: {
      CMat u = CMat::Zero(2, 2);
      u(0, 0) = 1;
      u(1, 1) = -i1;
      return u;
    }
    case GateKind::X: return pauli_matrix(Pauli::X);
    case GateKind::Y: return pauli_matrix(Pauli::Y);
    case GateKind::Z: return pauli_matrix(Pauli::Z);
    case GateKind::CNOT: {
      CMat u = CMat::Zero(4, 4);
      u(0, 0) = u(1, 1) = u(2, 3) = u(3, 2) = 1;
      return u;
    }
    case GateKind::CZ: {
      CMat u = CMat::Identity(4, 4);
      u(3, 3) = -1;
      return u;
    }
    case GateKind::U3: {
      const double th = g.angles[0], ph = g.angles[1], la = g.angles[2];
      const double c = std::cos(th / 2), s = std::sin(th / 2);
      CMat u(2, 2);
      u(0, 0) = c;
      u(0, 1) = -std::exp(i1 * la) * s;
      u(1, 0) = std::exp(i1 * ph) * s;
      u(1, 1) = std::exp(i1 * (ph + la)) * c;
      return u;
    }
  }
  throw InvalidArgument("unknown gate kind");
}

CMat circuit_unitary(const Circuit& c) {
  const std::size_t dim = std::size_t{1} << c.n_qubits;
  CMat u = CMat::Identity(dim, dim);
  for (const auto& g : c.gates)
    u = embed_unitary(c.n_qubits, embed_order(g.targets), gate_unitary(g)) * u;
  return u;
}

Eigen::Matrix2d readout_weak() {
  Eigen::Matrix2d m;
  m << 0.997, 0.003, 0.005, 0.995;
  return m;
}

Eigen::Matrix2d readout_strong() {
  Eigen::Matrix2d m;
  m << 0.97, 0.03, 0.05, 0.95;
  return m;
}

const Eigen::Matrix2d& NoiseModel::confusion(int q) const {
  if (readout.empty()) throw InvalidArgument("noise model has no readout confusion");
  if (readout.size() == 1) return readout[0];
  if (q < 0 || q >= static_cast<int>(readout.size()))
    throw InvalidArgument("no confusion matrix for qubit " + std::to_string(q));
  return readout[q];
}

double NoiseModel::lambda_for_arity(int arity) const {
  auto it = gate_depolarizing.find(arity);
  return it == gate_depolarizing.end() ? 0.0 : it->second;
}

void NoiseModel::validate(int n_qubits) const {
  for (auto [arity, lam] : gate_depolarizing) {
    if (arity < 1) throw InvalidArgument("depolarizing arity must be >= 1");
    if (!(lam >= 0.0 && lam <= 1.0))
      throw InvalidArgument("depolarizing strength must lie in [0, 1]");
  }
  if (!readout.empty() && readout.size() != 1 &&
      readout.size() != static_cast<std::size_t>(n_qubits))
    throw InvalidArgument("readout confusion must list one matrix or one per qubit");
  for (const auto& m : readout)
    for (int r = 0; r < 2; ++r) {
      if (std::abs(m(r, 0) + m(r, 1) - 1.0) > 1e-12)
        throw InvalidArgument("confusion matrix rows must sum to 1");
      if (m(r, 0) < 0 || m(r, 1) < 0)
        throw InvalidArgument("confusion matrix entries must be nonnegative");
    }
  if (prep_rotation_sigma_deg < 0)
    throw InvalidArgument("preparation rotation sigma must be nonnegative");
}

std::uint64_t ShotResult::total() const {
  std::uint64_t t = 0;
  for (const auto& [_, c] : counts) t += c;
  return t;
}

DensityMatrix run_exact(const Circuit& c, const NoiseModel* noise, const DensityMatrix& rho0) {
  if (rho0.n_qubits != c.n_qubits)
    throw InvalidArgument("initial state size does not match circuit");
  DensityMatrix rho = rho0;
  for (const auto& g : c.gates) {
    conjugate_on_qubits(rho.mat, c.n_qubits, embed_order(g.targets), gate_unitary(g));
    if (noise) {
      const double lam = noise->lambda_for_arity(g.arity());
      if (lam > 0) partial_depolarize(rho.mat, c.n_qubits, g.targets, lam);
    }
  }
  return rho;
}

CMat circuit_superop(const Circuit& c, const NoiseModel* noise) {
  const int n = c.n_qubits;
  const std::uint64_t dim = std::uint64_t{1} << n;
  const std::uint64_t dim2 = dim * dim;
  CMat s = CMat::Identity(dim2, dim2);
  for (const auto& g : c.gates) {
    const CMat u = gate_unitary(g);
    const std::vector<int> order = embed_order(g.targets);
    const double lam = noise ? noise->lambda_for_arity(g.arity()) : 0.0;
    for (std::uint64_t col = 0; col < dim2; ++col) {
      Eigen::Map<CMat> op(s.col(col).data(), dim, dim);
      conjugate_on_qubits(op, n, order, u);
      if (lam > 0) partial_depolarize(op, n, g.targets, lam);
    }
  }
  return s;
}

Circuit prepare_sic(std::uint64_t index, int n,
                    const std::vector<std::array<double, 3>>* prep_error) {
  if (index >= (std::uint64_t{1} << (2 * n)))
    throw InvalidArgument("SIC state index out of range");
  if (prep_error && prep_error->size() != static_cast<std::size_t>(n))
    throw InvalidArgument("preparation error must list angles for every qubit");
  Circuit c(n);
  for (int q = 0; q < n; ++q) {
    const int digit = static_cast<int>((index >> (2 * (n - 1 - q))) & 3);
    auto [th, ph, la] = sic_prep_angles(digit);
    c.append(Gate::u3(q, th, ph, la));
  }
  if (prep_error)
    for (int q = 0; q < n; ++q) {
      const auto& a = (*prep_error)[q];
      c.append(Gate::u3(q, a[0], a[1], a[2]));
    }
  return c;
}

std::vector<std::array<double, 3>> sample_prep_error(int n, double sigma_deg, RngStream& rng) {
  const double to_rad = std::numbers::pi / 180.0;
  std::vector<std::array<double, 3>> out(n);
  for (auto& a : out)
    for (double& x : a) x = sigma_deg * rng.normal() * to_rad;
  return out;
}

Circuit basis_change_circuit(const PauliString& w) {
  Circuit c(w.n_qubits());
  for (int q = 0; q < w.n_qubits(); ++q) {
    switch (w.factors[q]) {
      case Pauli::X: c.append(Gate::h(q)); break;
      case Pauli::Y:
        c.append(Gate::sdg(q));
        c.append(Gate::h(q));
        break;
      default: break;
    }
  }
  return c;
}

ShotResult sample_bitstrings(const DensityMatrix& rho, std::uint64_t shots,
                             const NoiseModel* noise, RngStream& rng) {
  const int n = rho.n_qubits;
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> cdf(dim);
  double acc = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    acc += std::max(0.0, rho.mat(i, i).real());
    cdf[i] = acc;
  }
  if (acc <= 0) throw InvalidArgument("state has no probability mass");

  const bool flips = noise && noise->has_readout();
  ShotResult out;
  out.n_qubits = n;
  out.shots = shots;
  std::string key(n, '0');
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double r = rng.uniform() * acc;
    std::size_t idx =
        std::lower_bound(cdf.begin(), cdf.end(), r) - cdf.begin();
    if (idx >= dim) idx = dim - 1;
    for (int q = 0; q < n; ++q) {
      int b = (idx >> bitpos(n, q)) & 1;
      if (flips) {
        const auto& m = noise->confusion(q);
        if (rng.uniform() < m(b, 1 - b)) b = 1 - b;
      }
      key[q] = static_cast<char>('0' + b);
    }
    ++out.counts[key];
  }
  return out;
}

double parity_estimate(const ShotResult& r, const PauliString& w) {
  if (w.n_qubits() != r.n_qubits)
    throw InvalidArgument("observable size does not match shot record");
  if (w.is_identity()) return 1.0;
  std::int64_t signed_sum = 0;
  std::uint64_t total = 0;
  for (const auto& [key, count] : r.counts) {
    int parity = 0;
    for (int q = 0; q < r.n_qubits; ++q)
      if (w.factors[q] != Pauli::I) parity ^= key[q] - '0';
    signed_sum += parity ? -static_cast<std::int64_t>(count) : static_cast<std::int64_t>(count);
    total += count;
  }
  if (total == 0) throw InvalidArgument("empty shot record");
  return static_cast<double>(signed_sum) / static_cast<double>(total);
}

double measure_pauli_shots(const DensityMatrix& rho, const PauliString& w,
                           std::uint64_t shots, const NoiseModel* noise, RngStream& rng) {
  if (w.n_qubits() != rho.n_qubits)
    throw InvalidArgument("observable size does not match state");
  if (w.is_identity()) return 1.0;
  if (shots == 0) throw InvalidArgument("shot count must be positive");
  const DensityMatrix rotated = run_exact(basis_change_circuit(w), nullptr, rho);
  return parity_estimate(sample_bitstrings(rotated, shots, noise, rng), w);
}

}  // namespace zerofid
