#include "mpnormal/arnoldi.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

#include "mpnormal/error.hpp"

namespace mpnormal {

std::vector<Complex> largest_magnitude_eigenvalues(const std::function<Vector(const Vector&)>& apply, Eigen::Index n,
                                                   std::size_t count, const ArnoldiOptions& options) {
  if (count == 0 || static_cast<Eigen::Index>(count) > n) {
    throw Error(ErrorCode::InvalidArgument, "Arnoldi needs 1 <= count <= n");
  }
  const Eigen::Index max_dim = std::min<Eigen::Index>(n, static_cast<Eigen::Index>(options.max_dim));

  Matrix basis = Matrix::Zero(n, max_dim + 1);
  Matrix hess = Matrix::Zero(max_dim + 1, max_dim);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  basis.col(0) = v.normalized();

  auto ritz = [&](Eigen::Index dim, bool& converged) {
    Eigen::ComplexEigenSolver<Matrix> es(hess.topLeftCorner(dim, dim));
    std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
      return std::abs(es.eigenvalues()(x)) > std::abs(es.eigenvalues()(y));
    });
    const double beta = dim < max_dim + 1 ? std::abs(hess(dim, dim - 1)) : 0.0;
    converged = true;
    std::vector<Complex> out;
    for (std::size_t i = 0; i < count; ++i) {
      const Eigen::Index idx = order[i];
      const Complex theta = es.eigenvalues()(idx);
      const Vector y = es.eigenvectors().col(idx).normalized();
      const double residual = beta * std::abs(y(dim - 1));
      if (residual > options.tol * std::max(std::abs(theta), 1e-300)) converged = false;
      out.push_back(theta);
    }
    return out;
  };

  for (Eigen::Index j = 0; j < max_dim; ++j) {
    Vector w = apply(basis.col(j));
    // Two passes of classical Gram-Schmidt.
    for (int pass = 0; pass < 2; ++pass) {
      const Vector coeffs = basis.leftCols(j + 1).adjoint() * w;
      w -= basis.leftCols(j + 1) * coeffs;
      hess.col(j).head(j + 1) += coeffs;
    }
    const double beta = w.norm();
    hess(j + 1, j) = beta;
    const Eigen::Index dim = j + 1;
    const bool breakdown = beta <= 1e-14 * hess.col(j).head(j + 1).norm();
    if (!breakdown) basis.col(j + 1) = w / beta;

    const bool check = breakdown || dim == max_dim ||
                       (dim >= static_cast<Eigen::Index>(count) + 10 && dim % 10 == 0);
    if (!check || dim < static_cast<Eigen::Index>(count)) continue;
    bool converged = false;
    if (breakdown) hess(j + 1, j) = 0.0;
    auto values = ritz(dim, converged);
    if (converged || breakdown) return values;
  }
  throw Error(ErrorCode::InvalidArgument, "Arnoldi did not converge within the Krylov dimension cap");
}

}  // namespace mpnormal
