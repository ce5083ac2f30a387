#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mpnormal/block.hpp"
#include "mpnormal/spectrum.hpp"
#include "mpnormal/tolerances.hpp"

namespace mpnormal {

// Independent checks of the closed-form spectrum: the boundary condition
// itself, a finite-difference discretization, and quadrature identities.

/// |det(E - W)|, E = e^{(lambda I - A)(b - a)}, divided by the product over rows
/// of |E_i| + |W_i| (a Hadamard-type bound), so the value lies in [0, 1]. Zero iff lambda is an
/// eigenvalue of the block operator.
double characteristic_residual(const Block& block, Complex lambda);

/// Eigenvalues for |k| <= k_max derived from the boundary condition only:
/// u(t) = e^{(lambda - A)(t - a)} u(a) and u(b) = W u(a) give
/// e^{lambda l} in sigma(e^{A l} W), hence lambda = (Log mu + 2 pi i k) / l.
std::vector<Complex> characteristic_eigenvalues(const Block& block, long k_max);

enum class FdScheme { implicit_trapezoid, backward_euler };

/// Discretization of u' + A u = lambda u on N equal steps,
///
///   (u_{j+1} - u_j)/h + A (theta u_{j+1} + (1 - theta) u_j)
///       = lambda (theta u_{j+1} + (1 - theta) u_j),   j = 0..N-1,
///
/// theta = 1/2 (trapezoid) or 1 (backward Euler), with u_N replaced by W u_0.
/// Unknowns u_0..u_{N-1} are stacked node-major (index j * dim + i), giving
/// the pencil K u = lambda M u of size dim * N.
class DiscretizedOperator {
 public:
  /// Throws Error(SingularStencil) for N < 16 or a singular boundary closure.
  DiscretizedOperator(const Block& block, std::size_t intervals, FdScheme scheme = FdScheme::implicit_trapezoid);

  [[nodiscard]] Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(dim_ * intervals_); }
  [[nodiscard]] std::size_t intervals() const noexcept { return intervals_; }
  [[nodiscard]] FdScheme scheme() const noexcept { return scheme_; }

  [[nodiscard]] Matrix stiffness() const;  // K, dense
  [[nodiscard]] Matrix mass() const;       // M, dense
  [[nodiscard]] Vector apply_mass(const Vector& x) const;
  /// K^{-1} b by sweeping the two-term recurrence and closing it at u_N = W u_0.
  [[nodiscard]] Vector solve_stiffness(const Vector& rhs) const;

 private:
  Eigen::Index dim_;
  std::size_t intervals_;
  FdScheme scheme_;
  double theta_;
  double step_;
  Matrix a_;
  Matrix w_;
  Matrix lead_;   // I/h + theta A, multiplies u_{j+1}
  Matrix trail_;  // -I/h + (1 - theta) A, multiplies u_j
  Eigen::PartialPivLU<Matrix> lead_lu_;
  Eigen::PartialPivLU<Matrix> closure_lu_;  // W - G^N, G = -lead^{-1} trail
};

/// The `count` eigenvalues of the discretized pencil closest to the origin,
/// sorted by modulus. Large systems use shift-invert Arnoldi on K^{-1} M
/// (nu = 1 / lambda); systems up to 512 unknowns are solved densely.
std::vector<Complex> fd_eigenvalues(const Block& block, std::size_t intervals, std::size_t count,
                                    FdScheme scheme = FdScheme::implicit_trapezoid);

/// Dense reference path for fd_eigenvalues (any size; cubic cost).
std::vector<Complex> fd_eigenvalues_dense(const Block& block, std::size_t intervals, std::size_t count,
                                          FdScheme scheme = FdScheme::implicit_trapezoid);

/// Largest distance from an FD eigenvalue with |Im| <= im_limit to its nearest
/// exact eigenvalue.
double max_matched_distance(std::span<const Complex> fd, std::span<const Complex> exact, double im_limit);

/// Symmetric Hausdorff distance between two finite point sets.
double hausdorff_distance(std::span<const Complex> x, std::span<const Complex> y);

/// Values of a vector function at N + 1 equispaced nodes of [a, b].
struct GridFunction {
  std::size_t block_index = 1;
  double a = 0.0;
  double b = 1.0;
  std::vector<Vector> values;

  [[nodiscard]] std::size_t intervals() const noexcept { return values.empty() ? 0 : values.size() - 1; }
  [[nodiscard]] double spacing() const noexcept { return (b - a) / static_cast<double>(intervals()); }
  [[nodiscard]] double node(std::size_t j) const noexcept { return a + spacing() * static_cast<double>(j); }

  static GridFunction sample(const Block& block, std::size_t intervals, const std::function<Vector(double)>& fn,
                             std::size_t block_index = 1);
};

struct NormIdentity {
  double lhs = 0.0;  // |u' + A u|^2
  double rhs = 0.0;  // |u'|^2 + |A u|^2
  [[nodiscard]] double discrepancy() const noexcept { return std::abs(lhs - rhs); }
};

/// Trapezoid quadrature of both sides of |u' + Au|^2 = |u'|^2 + |Au|^2 for u
/// vanishing at both endpoints (u' by second-order differences). Throws
/// Error(BoundaryNotZero) if |u(a)| or |u(b)| exceeds 1e-12.
NormIdentity quadrature_norm_identity(const Block& block, const GridFunction& u);

/// |(W u0, A W u0) - (u0, A u0)|: the boundary form left over when u(b) = W u0,
/// u(a) = u0. Vanishes for every u0 iff W* A W = A.
double boundary_cancellation(const Block& block, const Vector& u0);

/// boundary_cancellation divided by |A| |u0|^2 (0 for u0 = 0).
double boundary_cancellation_scaled(const Block& block, const Vector& u0);

/// Gram matrix of the quadrature-normalized eigenfunctions
/// u(t) = e^{(lambda - alpha_m)(t - a)} v_m of the given records (one block),
/// trapezoid rule on N intervals.
Matrix eigenfunction_gram(const Block& block, std::span<const EigenvalueRecord> records, std::size_t intervals = 4096,
                          const Tolerances& tol = {});

}  // namespace mpnormal
