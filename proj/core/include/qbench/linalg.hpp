#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qbench {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using MatX = Eigen::MatrixXcd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// max |U^dagger U - I|
double unitarity_error(const MatX& u);

// True when a == e^{i phi} b for some phi, entrywise within tol.
bool equal_up_to_phase(const MatX& a, const MatX& b, double tol);

Mat4 kron(const Mat2& a, const Mat2& b);

}  // namespace qbench
