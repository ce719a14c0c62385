#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qbench/circuit.hpp"
#include "qbench/distributions.hpp"
#include "qbench/gate.hpp"
#include "qbench/linalg.hpp"
#include "qbench/rng.hpp"

namespace qbench::testing {

// Full 2^n unitary of a gate list built by explicit index bookkeeping, with
// amplitude index bit k being qubit k. Independent of the StateVector kernels.
inline MatX dense_gate(const Gate& g, int n) {
  const std::size_t dim = std::size_t{1} << n;
  MatX m = MatX::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  if (g.kind == GateKind::Barrier) return MatX::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  if (g.kind == GateKind::PauliLayer) {
    MatX acc = MatX::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < g.targets.size(); ++i) {
      Gate one = gates::single(GateKind::X, g.targets[i]);
      char l = g.paulis[i];
      if (l == 'I') continue;
      one.kind = l == 'X' ? GateKind::X : l == 'Y' ? GateKind::Y : GateKind::Z;
      acc = dense_gate(one, n) * acc;
    }
    return acc;
  }
  if (g.targets.size() == 1) {
    const Mat2 u = single_qubit_matrix(g.kind, g.angle);
    const int q = g.targets[0];
    for (std::size_t col = 0; col < dim; ++col) {
      const std::size_t bit = (col >> q) & 1U;
      for (std::size_t out = 0; out < 2; ++out) {
        const std::size_t row = (col & ~(std::size_t{1} << q)) | (out << q);
        m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
            u(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(bit));
      }
    }
    return m;
  }
  const Mat4 u = two_qubit_matrix(g);
  const int a = g.targets[0], b = g.targets[1];
  for (std::size_t col = 0; col < dim; ++col) {
    const std::size_t in = (((col >> a) & 1U) << 1) | ((col >> b) & 1U);
    for (std::size_t out = 0; out < 4; ++out) {
      std::size_t row = col & ~(std::size_t{1} << a) & ~(std::size_t{1} << b);
      row |= ((out >> 1) & 1U) << a;
      row |= (out & 1U) << b;
      m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
          u(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in));
    }
  }
  return m;
}

inline MatX dense_unitary(const Circuit& c) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << c.n_qubits());
  MatX u = MatX::Identity(dim, dim);
  c.for_each_gate([&](const Gate& g) {
    if (g.kind != GateKind::Measure) u = dense_gate(g, c.n_qubits()) * u;
  });
  return u;
}

// Ideal distribution over qubits (no measurement relabeling).
inline std::vector<double> dense_probabilities(const Circuit& c) {
  const MatX u = dense_unitary(c);
  std::vector<double> p(static_cast<std::size_t>(u.rows()));
  for (Eigen::Index i = 0; i < u.rows(); ++i) p[static_cast<std::size_t>(i)] = std::norm(u(i, 0));
  return p;
}

// Random layered circuit over the QASM-expressible alphabet.
inline Circuit random_program(int n, int n_gates, Rng& rng, bool clifford_only = false) {
  static const GateKind one[] = {GateKind::H,  GateKind::X,   GateKind::Y, GateKind::Z,  GateKind::S,
                                 GateKind::Sdg, GateKind::T,  GateKind::Tdg, GateKind::Rx, GateKind::Ry,
                                 GateKind::Rz};
  static const GateKind two[] = {GateKind::CX, GateKind::CZ, GateKind::SWAP};
  Circuit c(n);
  for (int i = 0; i < n_gates; ++i) {
    if (n >= 2 && rng.below(3) == 0) {
      const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
      if (b >= a) ++b;
      Gate g = gates::cx(a, b);
      g.kind = two[rng.below(3)];
      c.append(g);
      continue;
    }
    const int q = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    const GateKind k = one[rng.below(clifford_only ? 6 : 11)];
    double angle = 0.0;
    if (k == GateKind::Rx || k == GateKind::Ry || k == GateKind::Rz) angle = (rng.uniform() - 0.5) * 4.0 * kPi;
    c.append(gates::single(k, q, angle));
  }
  return c;
}

inline double tvd(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return s / 2.0;
}

// Upper bound on the expected TVD between an m-shot empirical distribution and
// its source, plus a McDiarmid tail of 3/sqrt(m) (exceeded with prob. < e^-18).
inline double tvd_sampling_bound(const std::vector<double>& p, std::uint64_t shots) {
  double mean = 0.0;
  for (double x : p) mean += std::sqrt(x * (1.0 - x));
  mean /= 2.0 * std::sqrt(static_cast<double>(shots));
  return mean + 3.0 / std::sqrt(static_cast<double>(shots));
}

inline std::string data_path(const std::string& name) { return std::string(QBENCH_TEST_DATA_DIR) + "/" + name; }

}  // namespace qbench::testing
