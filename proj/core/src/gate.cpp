#include "qbench/gate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "qbench/error.hpp"

namespace qbench {

namespace {

struct KindInfo {
  GateKind kind;
  std::string_view name;
  int arity;  // -1 = variadic
};

constexpr std::array<KindInfo, 18> kKinds = {{
    {GateKind::H, "H", 1},        {GateKind::X, "X", 1},
    {GateKind::Y, "Y", 1},        {GateKind::Z, "Z", 1},
    {GateKind::S, "S", 1},        {GateKind::Sdg, "Sdg", 1},
    {GateKind::T, "T", 1},        {GateKind::Tdg, "Tdg", 1},
    {GateKind::Rx, "Rx", 1},      {GateKind::Ry, "Ry", 1},
    {GateKind::Rz, "Rz", 1},      {GateKind::CX, "CX", 2},
    {GateKind::CZ, "CZ", 2},      {GateKind::SWAP, "SWAP", 2},
    {GateKind::U2Q, "U2Q", 2},    {GateKind::PauliLayer, "PauliLayer", -1},
    {GateKind::Measure, "Measure", 1}, {GateKind::Barrier, "Barrier", -1},
}};

const KindInfo& info(GateKind kind) {
  return kKinds[static_cast<std::size_t>(kind)];
}

}  // namespace

double unitarity_error(const MatX& u) {
  MatX d = u.adjoint() * u - MatX::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff();
}

bool equal_up_to_phase(const MatX& a, const MatX& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  Eigen::Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  if (std::abs(b(r, c)) < tol) return a.cwiseAbs().maxCoeff() < tol;
  cplx phase = a(r, c) / b(r, c);
  if (std::abs(std::abs(phase) - 1.0) > tol) return false;
  return (a - phase * b).cwiseAbs().maxCoeff() < tol;
}

Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

std::string_view gate_name(GateKind kind) { return info(kind).name; }

std::optional<GateKind> gate_kind_from_name(std::string_view name) {
  for (const auto& k : kKinds)
    if (k.name == name) return k.kind;
  return std::nullopt;
}

std::optional<int> gate_arity(GateKind kind) {
  int a = info(kind).arity;
  if (a < 0) return std::nullopt;
  return a;
}

bool is_parameterized(GateKind kind) {
  return kind == GateKind::Rx || kind == GateKind::Ry || kind == GateKind::Rz;
}

bool is_single_qubit_unitary(GateKind kind) {
  return static_cast<int>(kind) <= static_cast<int>(GateKind::Rz);
}

bool is_two_qubit_unitary(GateKind kind) {
  return kind == GateKind::CX || kind == GateKind::CZ || kind == GateKind::SWAP ||
         kind == GateKind::U2Q;
}

void Gate::validate() const {
  if (auto a = gate_arity(kind); a && static_cast<int>(targets.size()) != *a) {
    throw PreconditionError(std::string(gate_name(kind)) + " expects " + std::to_string(*a) +
                            " target(s), got " + std::to_string(targets.size()));
  }
  if (targets.empty() && kind != GateKind::Barrier) {
    throw PreconditionError(std::string(gate_name(kind)) + " has no targets");
  }
  for (int t : targets)
    if (t < 0) throw PreconditionError("negative qubit index");
  for (std::size_t i = 0; i < targets.size(); ++i)
    for (std::size_t j = i + 1; j < targets.size(); ++j)
      if (targets[i] == targets[j])
        throw PreconditionError(std::string(gate_name(kind)) + " repeats qubit " +
                                std::to_string(targets[i]));
  if (!std::isfinite(angle)) throw PreconditionError("gate angle is not finite");
  if (kind == GateKind::U2Q) {
    if (!unitary) throw PreconditionError("U2Q gate without a matrix");
    if (unitarity_error(*unitary) > 1e-10) throw PreconditionError("U2Q matrix is not unitary");
  }
  if (kind == GateKind::PauliLayer) {
    if (paulis.size() != targets.size())
      throw PreconditionError("PauliLayer letter count does not match targets");
    for (char c : paulis)
      if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z')
        throw PreconditionError(std::string("invalid Pauli letter '") + c + "'");
  }
  if (kind == GateKind::Measure && cbit < 0) throw PreconditionError("Measure without a cbit");
}

bool operator==(const Gate& a, const Gate& b) {
  if (a.kind != b.kind || a.targets != b.targets || a.angle != b.angle || a.cbit != b.cbit ||
      a.paulis != b.paulis)
    return false;
  if (static_cast<bool>(a.unitary) != static_cast<bool>(b.unitary)) return false;
  if (a.unitary && *a.unitary != *b.unitary) return false;
  return true;
}

namespace gates {

Gate single(GateKind kind, int q, double angle) {
  Gate g;
  g.kind = kind;
  g.targets = {q};
  if (is_parameterized(kind)) g.angle = angle;
  return g;
}

Gate h(int q) { return single(GateKind::H, q); }
Gate x(int q) { return single(GateKind::X, q); }
Gate y(int q) { return single(GateKind::Y, q); }
Gate z(int q) { return single(GateKind::Z, q); }
Gate s(int q) { return single(GateKind::S, q); }
Gate sdg(int q) { return single(GateKind::Sdg, q); }
Gate t(int q) { return single(GateKind::T, q); }
Gate tdg(int q) { return single(GateKind::Tdg, q); }
Gate rx(int q, double angle) { return single(GateKind::Rx, q, angle); }
Gate ry(int q, double angle) { return single(GateKind::Ry, q, angle); }
Gate rz(int q, double angle) { return single(GateKind::Rz, q, angle); }

namespace {
Gate two(GateKind kind, int a, int b) {
  Gate g;
  g.kind = kind;
  g.targets = {a, b};
  return g;
}
}  // namespace

Gate cx(int control, int target) { return two(GateKind::CX, control, target); }
Gate cz(int a, int b) { return two(GateKind::CZ, a, b); }
Gate swap(int a, int b) { return two(GateKind::SWAP, a, b); }

Gate u2q(int a, int b, const Mat4& u) {
  Gate g = two(GateKind::U2Q, a, b);
  g.unitary = std::make_shared<const Mat4>(u);
  return g;
}

Gate pauli_layer(std::vector<int> targets, std::string letters) {
  Gate g;
  g.kind = GateKind::PauliLayer;
  g.targets = std::move(targets);
  g.paulis = std::move(letters);
  return g;
}

Gate measure(int q, int cbit) {
  Gate g;
  g.kind = GateKind::Measure;
  g.targets = {q};
  g.cbit = cbit;
  return g;
}

Gate barrier(std::vector<int> targets) {
  Gate g;
  g.kind = GateKind::Barrier;
  g.targets = std::move(targets);
  return g;
}

}  // namespace gates

Mat2 pauli_matrix(char letter) {
  Mat2 m;
  switch (letter) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw PreconditionError(std::string("invalid Pauli letter '") + letter + "'");
  }
  return m;
}

Mat2 single_qubit_matrix(GateKind kind, double angle) {
  const double r = 1.0 / std::sqrt(2.0);
  const cplx i(0, 1);
  Mat2 m;
  switch (kind) {
    case GateKind::H: m << r, r, r, -r; break;
    case GateKind::X: return pauli_matrix('X');
    case GateKind::Y: return pauli_matrix('Y');
    case GateKind::Z: return pauli_matrix('Z');
    case GateKind::S: m << 1, 0, 0, i; break;
    case GateKind::Sdg: m << 1, 0, 0, -i; break;
    case GateKind::T: m << 1, 0, 0, std::exp(i * (kPi / 4)); break;
    case GateKind::Tdg: m << 1, 0, 0, std::exp(-i * (kPi / 4)); break;
    case GateKind::Rx: {
      double c = std::cos(angle / 2), s = std::sin(angle / 2);
      m << c, -i * s, -i * s, c;
      break;
    }
    case GateKind::Ry: {
      double c = std::cos(angle / 2), s = std::sin(angle / 2);
      m << c, -s, s, c;
      break;
    }
    case GateKind::Rz:
      m << std::exp(-i * (angle / 2)), 0, 0, std::exp(i * (angle / 2));
      break;
    default:
      throw PreconditionError(std::string(gate_name(kind)) + " is not a single-qubit unitary");
  }
  return m;
}

Mat4 two_qubit_matrix(const Gate& g) {
  Mat4 m = Mat4::Zero();
  switch (g.kind) {
    case GateKind::CX:
      m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
      break;
    case GateKind::CZ:
      m(0, 0) = m(1, 1) = m(2, 2) = 1;
      m(3, 3) = -1;
      break;
    case GateKind::SWAP:
      m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
      break;
    case GateKind::U2Q:
      return *g.unitary;
    default:
      throw PreconditionError(std::string(gate_name(g.kind)) + " is not a two-qubit unitary");
  }
  return m;
}

Gate inverse(const Gate& g) {
  Gate out = g;
  switch (g.kind) {
    case GateKind::S: out.kind = GateKind::Sdg; break;
    case GateKind::Sdg: out.kind = GateKind::S; break;
    case GateKind::T: out.kind = GateKind::Tdg; break;
    case GateKind::Tdg: out.kind = GateKind::T; break;
    case GateKind::Rx:
    case GateKind::Ry:
    case GateKind::Rz: out.angle = -g.angle; break;
    case GateKind::U2Q:
      out.unitary = std::make_shared<const Mat4>(g.unitary->adjoint());
      break;
    case GateKind::Measure:
      throw PreconditionError("measurement is not invertible");
    default:
      break;
  }
  return out;
}

std::optional<int> quarter_turns(double angle) {
  double k = angle / (kPi / 2);
  double nearest = std::round(k);
  if (std::abs(k - nearest) > 1e-9) return std::nullopt;
  long long n = static_cast<long long>(nearest) % 4;
  if (n < 0) n += 4;
  return static_cast<int>(n);
}

bool is_clifford(const Gate& g) {
  switch (g.kind) {
    case GateKind::H:
    case GateKind::X:
    case GateKind::Y:
    case GateKind::Z:
    case GateKind::S:
    case GateKind::Sdg:
    case GateKind::CX:
    case GateKind::CZ:
    case GateKind::SWAP:
    case GateKind::PauliLayer:
    case GateKind::Measure:
    case GateKind::Barrier:
      return true;
    case GateKind::Rx:
    case GateKind::Ry:
    case GateKind::Rz:
      return quarter_turns(g.angle).has_value();
    default:
      return false;
  }
}

}  // namespace qbench
