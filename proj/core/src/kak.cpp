#include "qbench/kak.hpp"

#include <array>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "qbench/error.hpp"

namespace qbench {

namespace {

const Mat4& magic() {
  static const Mat4 b = [] {
    const cplx i(0.0, 1.0);
    Mat4 m;
    m << 1, 0, 0, i,
         0, i, 1, 0,
         0, i, -1, 0,
         1, 0, 0, -i;
    return Mat4(m / std::sqrt(2.0));
  }();
  return b;
}

// Diagonals of XX, YY, ZZ in the magic basis (real, +-1).
const std::array<Eigen::Vector4d, 3>& magic_diagonals() {
  static const std::array<Eigen::Vector4d, 3> d = [] {
    std::array<Eigen::Vector4d, 3> out;
    const char letters[] = {'X', 'Y', 'Z'};
    for (int k = 0; k < 3; ++k) {
      Mat2 p = pauli_matrix(letters[k]);
      Mat4 m = magic().adjoint() * kron(p, p) * magic();
      for (int j = 0; j < 4; ++j) out[static_cast<std::size_t>(k)](j) = m(j, j).real();
    }
    return out;
  }();
  return d;
}

struct KronFactors {
  Mat2 a, b;
  cplx phase;
};

// k = phase * (a (x) b) with a, b in SU(2).
KronFactors kron_factor(const Mat4& k) {
  int bi = 0, bj = 0;
  double best = -1.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double n = k.block(2 * i, 2 * j, 2, 2).norm();
      if (n > best) {
        best = n;
        bi = i;
        bj = j;
      }
    }
  Mat2 blk = k.block(2 * bi, 2 * bj, 2, 2);
  Mat2 b = blk / std::sqrt(blk.determinant());
  Mat2 a;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) a(i, j) = (b.adjoint() * k.block(2 * i, 2 * j, 2, 2)).trace() / 2.0;
  cplx da = std::sqrt(a.determinant());
  return {a / da, b, da};
}

double wrap_angle(double t) {
  double w = std::remainder(t, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

}  // namespace

Mat4 interaction_matrix(double a, double b, double c) {
  const auto& d = magic_diagonals();
  Mat4 diag = Mat4::Zero();
  for (int j = 0; j < 4; ++j) diag(j, j) = std::exp(cplx(0.0, a * d[0](j) + b * d[1](j) + c * d[2](j)));
  return magic() * diag * magic().adjoint();
}

Mat4 kak_reconstruct(const KakDecomposition& k) {
  return k.phase * kron(k.after0, k.after1) * interaction_matrix(k.a, k.b, k.c) *
         kron(k.before0, k.before1);
}

KakDecomposition kak_decompose(const Mat4& u) {
  if (unitarity_error(u) > 1e-8) throw PreconditionError("KAK input is not unitary");
  const Mat4& bm = magic();
  cplx det = u.determinant();
  cplx phase4 = std::polar(1.0, std::arg(det) / 4.0);
  Mat4 us = u / phase4;
  Mat4 up = bm.adjoint() * us * bm;
  Mat4 m = up.transpose() * up;
  Eigen::Matrix4d mr = m.real(), mi = m.imag();

  static constexpr double kMix[][2] = {{1.0, 0.0}, {0.0, 1.0},     {1.0, 0.5},     {0.37, 1.61},
                                       {1.3, -0.77}, {-0.43, 0.91}, {0.613, 0.211}, {2.1, 1.4}};
  Eigen::Matrix4d o;
  bool found = false;
  for (const auto& mix : kMix) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(mix[0] * mr + mix[1] * mi);
    o = es.eigenvectors();
    Mat4 dm = o.transpose().cast<cplx>() * m * o.cast<cplx>();
    double off = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j) off = std::max(off, std::abs(dm(i, j)));
    if (off < 1e-10) {
      found = true;
      break;
    }
  }
  if (!found) throw Error("KAK decomposition: could not diagonalize the magic-basis Gram matrix");
  if (o.determinant() < 0) o.col(0) *= -1.0;

  Mat4 dm = o.transpose().cast<cplx>() * m * o.cast<cplx>();
  Eigen::Vector4cd s;
  for (int j = 0; j < 4; ++j) s(j) = std::sqrt(dm(j, j));
  Mat4 qc = up * o.cast<cplx>();
  for (int j = 0; j < 4; ++j) qc.col(j) /= s(j);
  Eigen::Matrix4d q = qc.real();
  if (q.determinant() < 0) {
    q.col(0) *= -1.0;
    s(0) = -s(0);
  }

  const auto& hd = magic_diagonals();
  Eigen::Matrix4d sys;
  Eigen::Vector4d theta;
  for (int j = 0; j < 4; ++j) {
    sys(j, 0) = 1.0;
    sys(j, 1) = hd[0](j);
    sys(j, 2) = hd[1](j);
    sys(j, 3) = hd[2](j);
    theta(j) = std::arg(s(j));
  }
  Eigen::Vector4d x = sys.fullPivLu().solve(theta);

  Mat4 k1 = bm * q.cast<cplx>() * bm.adjoint();
  Mat4 k2 = bm * o.transpose().cast<cplx>() * bm.adjoint();
  KronFactors f1 = kron_factor(k1);
  KronFactors f2 = kron_factor(k2);

  KakDecomposition out;
  out.after0 = f1.a;
  out.after1 = f1.b;
  out.before0 = f2.a;
  out.before1 = f2.b;
  out.a = x(1);
  out.b = x(2);
  out.c = x(3);
  out.phase = phase4 * std::polar(1.0, x(0)) * f1.phase * f2.phase;
  double err = (kak_reconstruct(out) - u).cwiseAbs().maxCoeff();
  if (err > 1e-8) throw Error("KAK decomposition failed to reproduce its input (error " + std::to_string(err) + ")");
  return out;
}

std::vector<CxSynthesisStep> synthesize_three_cx(const Mat4& u, int q0, int q1) {
  KakDecomposition k = kak_decompose(u);
  auto one = [](int q, const Mat2& m) {
    CxSynthesisStep s;
    s.op = {q, m};
    return s;
  };
  auto cx = [](int c, int t) {
    CxSynthesisStep s;
    s.is_cx = true;
    s.control = c;
    s.target = t;
    return s;
  };
  auto rz = [](double t) { return single_qubit_matrix(GateKind::Rz, t); };
  auto ry = [](double t) { return single_qubit_matrix(GateKind::Ry, t); };
  const double h = kPi / 2.0;
  return {
      one(q0, rz(-h) * k.before0),
      one(q1, k.before1),
      cx(q1, q0),
      one(q1, ry(h - 2.0 * k.b)),
      cx(q0, q1),
      one(q0, rz(h - 2.0 * k.c)),
      one(q1, ry(2.0 * k.a - h)),
      cx(q1, q0),
      one(q0, k.after0),
      one(q1, k.after1 * rz(h)),
  };
}

EulerAngles zyz_angles(const Mat2& u) {
  cplx sd = std::sqrt(u.determinant());
  Mat2 v = u / sd;
  EulerAngles e;
  e.phase = std::arg(sd);
  double c = std::abs(v(0, 0)), s = std::abs(v(1, 0));
  e.beta = 2.0 * std::atan2(s, c);
  // At beta = 0 or pi only alpha + gamma or alpha - gamma is fixed; the free
  // combination goes entirely into alpha.
  if (s <= 1e-12) {
    e.alpha = 2.0 * std::arg(v(1, 1));
    e.gamma = 0.0;
  } else if (c <= 1e-12) {
    e.alpha = 2.0 * std::arg(v(1, 0));
    e.gamma = 0.0;
  } else {
    double sum = 2.0 * std::arg(v(1, 1));
    double diff = 2.0 * std::arg(v(1, 0));
    e.alpha = 0.5 * (sum + diff);
    e.gamma = 0.5 * (sum - diff);
  }
  return e;
}

bool has_universal_1q_family(const std::set<GateKind>& n) {
  auto has = [&](GateKind k) { return n.contains(k); };
  return (has(GateKind::Rz) && (has(GateKind::Ry) || has(GateKind::Rx) || has(GateKind::H))) ||
         (has(GateKind::Rx) && has(GateKind::Ry));
}

std::vector<Gate> synthesize_1q(const Mat2& u, int q, const std::set<GateKind>& natives, double tol) {
  std::vector<Gate> out;
  if (equal_up_to_phase(u, Mat2::Identity(), tol)) return out;
  static constexpr GateKind kFixed[] = {GateKind::H, GateKind::X,   GateKind::Y, GateKind::Z,
                                        GateKind::S, GateKind::Sdg, GateKind::T, GateKind::Tdg};
  for (GateKind k : kFixed)
    if (natives.contains(k) && equal_up_to_phase(u, single_qubit_matrix(k), tol)) return {gates::single(k, q)};

  auto emit = [&](GateKind k, double angle) {
    double w = wrap_angle(angle);
    if (std::abs(w) > tol) out.push_back(gates::single(k, q, w));
  };
  auto has = [&](GateKind k) { return natives.contains(k); };
  EulerAngles e = zyz_angles(u);
  const double h = kPi / 2.0;

  if (has(GateKind::Rz) && std::abs(wrap_angle(e.beta)) <= tol) {
    emit(GateKind::Rz, e.alpha + e.gamma);
  } else if (has(GateKind::Rz) && has(GateKind::Ry)) {
    emit(GateKind::Rz, e.gamma);
    emit(GateKind::Ry, e.beta);
    emit(GateKind::Rz, e.alpha);
  } else if (has(GateKind::Rz) && has(GateKind::Rx)) {
    emit(GateKind::Rz, e.gamma - h);
    emit(GateKind::Rx, e.beta);
    emit(GateKind::Rz, e.alpha + h);
  } else if (has(GateKind::Rx) && has(GateKind::Ry)) {
    Mat2 hm = single_qubit_matrix(GateKind::H);
    EulerAngles f = zyz_angles(hm * u * hm);
    emit(GateKind::Rx, f.gamma);
    emit(GateKind::Ry, -f.beta);
    emit(GateKind::Rx, f.alpha);
  } else if (has(GateKind::Rz) && has(GateKind::H)) {
    emit(GateKind::Rz, e.gamma - h);
    out.push_back(gates::h(q));
    emit(GateKind::Rz, e.beta);
    out.push_back(gates::h(q));
    emit(GateKind::Rz, e.alpha + h);
  } else {
    throw UnsupportedError(
        "native gate set has no universal single-qubit family (need Rz with Rx, Ry or H, or Rx with Ry)");
  }
  return out;
}

}  // namespace qbench
