#include "mpnormal/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "mpnormal/arnoldi.hpp"
#include "mpnormal/error.hpp"
#include "mpnormal/extension.hpp"

namespace mpnormal {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kDenseLimit = 512;

std::vector<Complex> closest_to_origin(std::vector<Complex> lambdas, std::size_t count) {
  std::stable_sort(lambdas.begin(), lambdas.end(),
                   [](Complex x, Complex y) { return std::abs(x) < std::abs(y); });
  if (lambdas.size() > count) lambdas.resize(count);
  return lambdas;
}

}  // namespace

double characteristic_residual(const Block& block, Complex lambda) {
  const auto dim = static_cast<Eigen::Index>(block.dim());
  const Matrix shifted = lambda * Matrix::Identity(dim, dim) - block.A();
  const Matrix transfer = matrix_exponential(shifted, block.length());
  const Matrix m = transfer - block.W();

  // log |det| - sum log(|row of e^{...}| + |row of W|); the rows of the two
  // terms bound the rows of the difference, so the ratio stays in [0, 1] even
  // when the difference cancels. Log domain against overflow.
  double log_rows = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double r = transfer.row(i).norm() + block.W().row(i).norm();
    if (r == 0.0) return 0.0;
    log_rows += std::log(r);
  }
  Eigen::PartialPivLU<Matrix> lu(m);
  double log_det = 0.0;
  const Matrix& packed = lu.matrixLU();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double d = std::abs(packed(i, i));
    if (d == 0.0) return 0.0;
    log_det += std::log(d);
  }
  return std::exp(log_det - log_rows);
}

std::vector<Complex> characteristic_eigenvalues(const Block& block, long k_max) {
  if (k_max < 0) throw Error(ErrorCode::InvalidArgument, "k_max must be >= 0");
  const double len = block.length();
  const Matrix transfer = matrix_exponential(block.A(), len) * block.W();
  Eigen::ComplexEigenSolver<Matrix> es(transfer, false);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::InvalidArgument, "eigensolver failed on e^{Al} W");

  std::vector<Complex> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const Complex mu = es.eigenvalues()(i);
    const double re = std::log(std::abs(mu)) / len;
    const double phase = std::arg(mu);
    for (long k = -k_max; k <= k_max; ++k) {
      out.emplace_back(re, (phase + 2.0 * kPi * static_cast<double>(k)) / len);
    }
  }
  return out;
}

DiscretizedOperator::DiscretizedOperator(const Block& block, std::size_t intervals, FdScheme scheme)
    : dim_(static_cast<Eigen::Index>(block.dim())),
      intervals_(intervals),
      scheme_(scheme),
      theta_(scheme == FdScheme::implicit_trapezoid ? 0.5 : 1.0),
      step_(block.length() / static_cast<double>(intervals)),
      a_(block.A()),
      w_(block.W()) {
  if (intervals < 16) throw Error(ErrorCode::SingularStencil, "at least 16 intervals are required");
  const Matrix id = Matrix::Identity(dim_, dim_);
  lead_ = id / step_ + theta_ * a_;
  trail_ = -id / step_ + (1.0 - theta_) * a_;
  lead_lu_.compute(lead_);

  // u_N = G^N u_0 + (particular part); closing with u_N = W u_0.
  const Matrix g = -lead_lu_.solve(trail_);
  Matrix g_power = id;
  for (std::size_t j = 0; j < intervals_; ++j) g_power = g * g_power;
  const Matrix closure = w_ - g_power;
  closure_lu_.compute(closure);
  const double rcond = closure_lu_.rcond();
  if (!(rcond > 1e-14)) {
    std::ostringstream os;
    os << "boundary closure W - G^N is singular (rcond " << rcond << ")";
    throw Error(ErrorCode::SingularStencil, os.str());
  }
}

Matrix DiscretizedOperator::stiffness() const {
  const Eigen::Index n = size();
  Matrix k = Matrix::Zero(n, n);
  const auto last = static_cast<Eigen::Index>(intervals_) - 1;
  for (Eigen::Index j = 0; j <= last; ++j) {
    k.block(j * dim_, j * dim_, dim_, dim_) += trail_;
    if (j < last) {
      k.block(j * dim_, (j + 1) * dim_, dim_, dim_) += lead_;
    } else {
      k.block(j * dim_, 0, dim_, dim_) += lead_ * w_;
    }
  }
  return k;
}

Matrix DiscretizedOperator::mass() const {
  const Eigen::Index n = size();
  Matrix m = Matrix::Zero(n, n);
  const Matrix id = Matrix::Identity(dim_, dim_);
  const auto last = static_cast<Eigen::Index>(intervals_) - 1;
  for (Eigen::Index j = 0; j <= last; ++j) {
    m.block(j * dim_, j * dim_, dim_, dim_) += (1.0 - theta_) * id;
    if (j < last) {
      m.block(j * dim_, (j + 1) * dim_, dim_, dim_) += theta_ * id;
    } else {
      m.block(j * dim_, 0, dim_, dim_) += theta_ * w_;
    }
  }
  return m;
}

Vector DiscretizedOperator::apply_mass(const Vector& x) const {
  Vector out(size());
  const auto last = static_cast<Eigen::Index>(intervals_) - 1;
  for (Eigen::Index j = 0; j <= last; ++j) {
    const Vector next = j < last ? Vector(x.segment((j + 1) * dim_, dim_)) : Vector(w_ * x.head(dim_));
    out.segment(j * dim_, dim_) = (1.0 - theta_) * x.segment(j * dim_, dim_) + theta_ * next;
  }
  return out;
}

Vector DiscretizedOperator::solve_stiffness(const Vector& rhs) const {
  const auto steps = static_cast<Eigen::Index>(intervals_);
  // Particular sweep from u_0 = 0: q_{j+1} = lead^{-1} (b_j - trail q_j).
  Vector q = Vector::Zero(dim_);
  for (Eigen::Index j = 0; j < steps; ++j) {
    q = lead_lu_.solve(Vector(rhs.segment(j * dim_, dim_) - trail_ * q));
  }
  Vector out(size());
  Vector u = closure_lu_.solve(q);
  out.head(dim_) = u;
  for (Eigen::Index j = 0; j + 1 < steps; ++j) {
    u = lead_lu_.solve(Vector(rhs.segment(j * dim_, dim_) - trail_ * u));
    out.segment((j + 1) * dim_, dim_) = u;
  }
  return out;
}

std::vector<Complex> fd_eigenvalues_dense(const Block& block, std::size_t intervals, std::size_t count,
                                          FdScheme scheme) {
  const DiscretizedOperator op(block, intervals, scheme);
  if (count > static_cast<std::size_t>(op.size())) throw Error(ErrorCode::SingularStencil, "count exceeds dim * N");
  const Matrix t = op.stiffness().partialPivLu().solve(op.mass());
  Eigen::ComplexEigenSolver<Matrix> es(t, false);
  const double largest = es.eigenvalues().cwiseAbs().maxCoeff();
  std::vector<Complex> lambdas;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const Complex nu = es.eigenvalues()(i);
    // nu = 0 belongs to infinite eigenvalues of a singular mass matrix.
    if (std::abs(nu) > 1e-12 * largest) lambdas.push_back(1.0 / nu);
  }
  return closest_to_origin(std::move(lambdas), count);
}

std::vector<Complex> fd_eigenvalues(const Block& block, std::size_t intervals, std::size_t count, FdScheme scheme) {
  if (count == 0) return {};
  if (block.dim() * intervals <= kDenseLimit) return fd_eigenvalues_dense(block, intervals, count, scheme);
  const DiscretizedOperator op(block, intervals, scheme);
  if (count > static_cast<std::size_t>(op.size())) throw Error(ErrorCode::SingularStencil, "count exceeds dim * N");
  const auto nus = largest_magnitude_eigenvalues(
      [&op](const Vector& x) { return op.solve_stiffness(op.apply_mass(x)); }, op.size(), count);
  std::vector<Complex> lambdas;
  lambdas.reserve(nus.size());
  for (Complex nu : nus) lambdas.push_back(1.0 / nu);
  return closest_to_origin(std::move(lambdas), count);
}

double max_matched_distance(std::span<const Complex> fd, std::span<const Complex> exact, double im_limit) {
  double worst = 0.0;
  for (Complex z : fd) {
    if (std::abs(z.imag()) > im_limit) continue;
    double best = std::numeric_limits<double>::infinity();
    for (Complex e : exact) best = std::min(best, std::abs(z - e));
    worst = std::max(worst, best);
  }
  return worst;
}

double hausdorff_distance(std::span<const Complex> x, std::span<const Complex> y) {
  if (x.empty() || y.empty()) {
    return x.empty() && y.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  }
  auto directed = [](std::span<const Complex> from, std::span<const Complex> to) {
    double worst = 0.0;
    for (Complex z : from) {
      double best = std::numeric_limits<double>::infinity();
      for (Complex w : to) best = std::min(best, std::abs(z - w));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(x, y), directed(y, x));
}

GridFunction GridFunction::sample(const Block& block, std::size_t intervals, const std::function<Vector(double)>& fn,
                                  std::size_t block_index) {
  GridFunction g;
  g.block_index = block_index;
  g.a = block.interval().a();
  g.b = block.interval().b();
  g.values.resize(intervals + 1);
  const double h = (g.b - g.a) / static_cast<double>(intervals);
  for (std::size_t j = 0; j <= intervals; ++j) {
    // Pin the last node to b exactly.
    const double t = j == intervals ? g.b : g.a + h * static_cast<double>(j);
    g.values[j] = fn(t);
  }
  return g;
}

NormIdentity quadrature_norm_identity(const Block& block, const GridFunction& u) {
  const std::size_t n = u.intervals();
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "grid function needs at least two intervals");
  const auto dim = static_cast<Eigen::Index>(block.dim());
  for (const auto& v : u.values) {
    if (v.size() != dim) throw Error(ErrorCode::DimensionMismatch, "grid values do not match the block dimension");
  }
  if (u.values.front().norm() > 1e-12 || u.values.back().norm() > 1e-12) {
    throw Error(ErrorCode::BoundaryNotZero, "u(a) and u(b) must vanish");
  }
  const double h = u.spacing();
  const auto& x = u.values;

  NormIdentity out;
  for (std::size_t j = 0; j <= n; ++j) {
    Vector du;
    if (j == 0) {
      du = (-3.0 * x[0] + 4.0 * x[1] - x[2]) / (2.0 * h);
    } else if (j == n) {
      du = (3.0 * x[n] - 4.0 * x[n - 1] + x[n - 2]) / (2.0 * h);
    } else {
      du = (x[j + 1] - x[j - 1]) / (2.0 * h);
    }
    const Vector au = block.A() * x[j];
    const double weight = (j == 0 || j == n) ? 0.5 * h : h;
    out.lhs += weight * (du + au).squaredNorm();
    out.rhs += weight * (du.squaredNorm() + au.squaredNorm());
  }
  return out;
}

double boundary_cancellation(const Block& block, const Vector& u0) {
  if (u0.size() != static_cast<Eigen::Index>(block.dim())) {
    throw Error(ErrorCode::DimensionMismatch, "u0 does not match the block dimension");
  }
  const Vector ub = block.W() * u0;
  const Complex at_b = ub.dot(block.A() * ub);
  const Complex at_a = u0.dot(block.A() * u0);
  return std::abs(at_b - at_a);
}

double boundary_cancellation_scaled(const Block& block, const Vector& u0) {
  const double denom = operator_norm(block.A()) * u0.squaredNorm();
  if (denom == 0.0) return 0.0;
  return boundary_cancellation(block, u0) / denom;
}

Matrix eigenfunction_gram(const Block& block, std::span<const EigenvalueRecord> records, std::size_t intervals,
                          const Tolerances& tol) {
  if (intervals < 1) throw Error(ErrorCode::InvalidArgument, "quadrature needs at least one interval");
  const auto modes = simultaneous_eigenbasis(block, tol.mode_residual, tol.cluster);
  const double h = block.length() / static_cast<double>(intervals);
  const auto count = static_cast<Eigen::Index>(records.size());
  const auto dim = static_cast<Eigen::Index>(block.dim());

  // Column r stacks u_r at every node, weighted by sqrt of the trapezoid weight.
  Matrix samples(dim * static_cast<Eigen::Index>(intervals + 1), count);
  for (Eigen::Index r = 0; r < count; ++r) {
    const auto& rec = records[static_cast<std::size_t>(r)];
    if (rec.mode_index < 1 || rec.mode_index > modes.size()) {
      throw Error(ErrorCode::InvalidArgument, "record mode index out of range for this block");
    }
    const ModePair& mode = modes[rec.mode_index - 1];
    const Complex rate = rec.lambda - mode.alpha;
    for (std::size_t j = 0; j <= intervals; ++j) {
      const double t = h * static_cast<double>(j);  // t - a
      const double weight = (j == 0 || j == intervals) ? 0.5 * h : h;
      samples.block(static_cast<Eigen::Index>(j) * dim, r, dim, 1) = std::sqrt(weight) * std::exp(rate * t) * mode.vector;
    }
    samples.col(r).normalize();
  }
  return samples.adjoint() * samples;
}

}  // namespace mpnormal
