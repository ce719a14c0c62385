#include "qbench/clifford_group.hpp"

#include <cmath>
#include <cstdio>
#include <deque>

#include "qbench/error.hpp"

namespace qbench {

namespace {

MatX embed(const Gate& g, int n) {
  if (n == 1) return single_qubit_matrix(g.kind, g.angle);
  // n == 2, qubit 0 is the high factor.
  if (is_single_qubit_unitary(g.kind)) {
    Mat2 u = single_qubit_matrix(g.kind, g.angle);
    return g.targets[0] == 0 ? kron(u, Mat2::Identity()) : kron(Mat2::Identity(), u);
  }
  Mat4 u = two_qubit_matrix(g);
  if (g.targets[0] == 0) return u;
  Mat4 swap = two_qubit_matrix(gates::swap(0, 1));
  return swap * u * swap;
}

}  // namespace

MatX sequence_unitary(const std::vector<Gate>& gates, int n) {
  MatX u = MatX::Identity(1 << n, 1 << n);
  for (const auto& g : gates) {
    if (g.kind == GateKind::Barrier) continue;
    u = embed(g, n) * u;
  }
  return u;
}

std::string CliffordGroup::key(const MatX& u) {
  // Fix the global phase on the first non-negligible entry, then quantize.
  cplx phase = 1.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    cplx v = u.data()[i];
    if (std::abs(v) > 1e-6) {
      phase = std::conj(v) / std::abs(v);
      break;
    }
  }
  std::string k;
  k.reserve(static_cast<std::size_t>(u.size()) * 12);
  char buf[32];
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    cplx v = u.data()[i] * phase;
    long long re = std::llround(v.real() * 1e6);
    long long im = std::llround(v.imag() * 1e6);
    std::snprintf(buf, sizeof buf, "%lld,%lld;", re, im);
    k += buf;
  }
  return k;
}

CliffordGroup::CliffordGroup(int n) : n_(n) {
  std::vector<Gate> generators;
  if (n == 1) {
    generators = {gates::h(0), gates::s(0)};
  } else {
    generators = {gates::h(0), gates::h(1), gates::s(0), gates::s(1), gates::cx(0, 1)};
  }
  std::vector<MatX> gen_mats;
  for (const auto& g : generators) gen_mats.push_back(embed(g, n));

  MatX id = MatX::Identity(1 << n, 1 << n);
  elements_.push_back({id, {}});
  lookup_.emplace(key(id), 0);
  std::deque<std::size_t> frontier{0};
  while (!frontier.empty()) {
    std::size_t cur = frontier.front();
    frontier.pop_front();
    for (std::size_t gi = 0; gi < generators.size(); ++gi) {
      MatX next = gen_mats[gi] * elements_[cur].matrix;
      std::string k = key(next);
      if (lookup_.contains(k)) continue;
      Element e{next, elements_[cur].gates};
      e.gates.push_back(generators[gi]);
      lookup_.emplace(std::move(k), elements_.size());
      elements_.push_back(std::move(e));
      frontier.push_back(elements_.size() - 1);
    }
  }
}

const CliffordGroup& CliffordGroup::one_qubit() {
  static const CliffordGroup group(1);
  return group;
}

const CliffordGroup& CliffordGroup::two_qubit() {
  static const CliffordGroup group(2);
  return group;
}

std::size_t CliffordGroup::index_of(const MatX& u) const {
  auto it = lookup_.find(key(u));
  if (it == lookup_.end()) throw PreconditionError("matrix is not an element of the Clifford group");
  return it->second;
}

std::size_t CliffordGroup::inverse_index(std::size_t index) const {
  return index_of(elements_.at(index).matrix.adjoint());
}

std::size_t CliffordGroup::compose(std::size_t first, std::size_t then) const {
  return index_of(elements_.at(then).matrix * elements_.at(first).matrix);
}

std::vector<Gate> CliffordGroup::instantiate(std::size_t index,
                                             const std::vector<int>& qubits) const {
  if (static_cast<int>(qubits.size()) != n_)
    throw PreconditionError("Clifford element needs " + std::to_string(n_) + " qubit(s)");
  std::vector<Gate> out = elements_.at(index).gates;
  for (auto& g : out)
    for (int& t : g.targets) t = qubits[static_cast<std::size_t>(t)];
  return out;
}

}  // namespace qbench
