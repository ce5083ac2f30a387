#pragma once

#include <complex>

#include <Eigen/Dense>

namespace mpnormal {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

struct HermitianEigen {
  RealVector values;  // ascending
  Matrix vectors;     // orthonormal columns, vectors.col(i) pairs with values(i)
};

/// Spectral decomposition of a Hermitian matrix with a symmetric-aware solver.
/// Throws Error(NonHermitian) when |M - M*| exceeds tol * max(1, |M|), and
/// Error(DimensionMismatch) for non-square or empty input.
HermitianEigen hermitian_eigendecomposition(const Matrix& m, double tol = 1e-10);

/// e^{tM}. Hermitian input goes through the eigendecomposition; anything else
/// uses Pade scaling-and-squaring.
Matrix matrix_exponential(const Matrix& m, double t);

/// Largest singular value.
double operator_norm(const Matrix& m);

/// |M - M*| in operator norm.
double hermitian_defect(const Matrix& m);

bool is_square(const Matrix& m) noexcept;

}  // namespace mpnormal

namespace mpnormal {

/// arg(z) on the branch (-pi, pi]; arg(-1 - 0i) is pi, not -pi.
double principal_arg(Complex z) noexcept;

}  // namespace mpnormal
