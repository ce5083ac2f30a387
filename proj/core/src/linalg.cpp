#include "mpnormal/linalg.hpp"

#include <algorithm>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "mpnormal/error.hpp"

namespace mpnormal {

bool is_square(const Matrix& m) noexcept { return m.rows() > 0 && m.rows() == m.cols(); }

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double hermitian_defect(const Matrix& m) {
  if (!is_square(m)) throw Error(ErrorCode::DimensionMismatch, "hermitian_defect needs a square matrix");
  return operator_norm(m - m.adjoint());
}

HermitianEigen hermitian_eigendecomposition(const Matrix& m, double tol) {
  if (!is_square(m)) throw Error(ErrorCode::DimensionMismatch, "eigendecomposition needs a non-empty square matrix");
  const double scale = std::max(1.0, operator_norm(m));
  const double defect = hermitian_defect(m);
  if (defect > tol * scale) {
    throw Error(ErrorCode::NonHermitian, "|M - M*| = " + std::to_string(defect));
  }
  // Symmetrize so the solver sees an exactly Hermitian input.
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NonHermitian, "self-adjoint eigensolver did not converge");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

Matrix matrix_exponential(const Matrix& m, double t) {
  if (!is_square(m)) throw Error(ErrorCode::DimensionMismatch, "matrix_exponential needs a square matrix");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-14 * scale) {
    const auto eig = hermitian_eigendecomposition(m, 1e-12);
    const RealVector expd = (t * eig.values.array()).exp().matrix();
    return eig.vectors * expd.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  }
  const Matrix scaled = t * m;
  return scaled.exp();
}

}  // namespace mpnormal

namespace mpnormal {

double principal_arg(Complex z) noexcept {
  constexpr double pi = 3.14159265358979323846;
  const double a = std::arg(z);
  if (a == 0.0) return 0.0;
  return a <= -pi ? a + 2.0 * pi : a;
}

}  // namespace mpnormal
