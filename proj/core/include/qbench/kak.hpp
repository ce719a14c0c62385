#pragma once

#include <set>
#include <vector>

#include "qbench/gate.hpp"
#include "qbench/linalg.hpp"

namespace qbench {

// u = phase * (after0 (x) after1) * exp(i(a XX + b YY + c ZZ)) * (before0 (x) before1)
// with factor 0 on the high qubit.
struct KakDecomposition {
  Mat2 before0, before1;
  Mat2 after0, after1;
  double a = 0.0, b = 0.0, c = 0.0;
  cplx phase{1.0, 0.0};
};

KakDecomposition kak_decompose(const Mat4& u);
Mat4 kak_reconstruct(const KakDecomposition& k);
Mat4 interaction_matrix(double a, double b, double c);

struct OneQubitOp {
  int qubit;
  Mat2 u;
};

// One step of a synthesized sequence: a one-qubit matrix or CX(control, target).
struct CxSynthesisStep {
  bool is_cx = false;
  int control = -1, target = -1;
  OneQubitOp op{};
};
// Time-ordered realization of u on (q0, q1) with exactly three CX gates.
std::vector<CxSynthesisStep> synthesize_three_cx(const Mat4& u, int q0, int q1);

// Zyz Euler angles: u = e^{i phase} Rz(alpha) Ry(beta) Rz(gamma).
struct EulerAngles {
  double alpha = 0.0, beta = 0.0, gamma = 0.0, phase = 0.0;
};
EulerAngles zyz_angles(const Mat2& u);

// True when the native set can express every single-qubit unitary.
bool has_universal_1q_family(const std::set<GateKind>& natives);

// Native gate sequence equal to u up to global phase; empty for identity.
// Throws UnsupportedError when the native set has no universal family.
std::vector<Gate> synthesize_1q(const Mat2& u, int q, const std::set<GateKind>& natives,
                                double tol = 1e-10);

}  // namespace qbench
