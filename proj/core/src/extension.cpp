#include "mpnormal/extension.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "mpnormal/error.hpp"

namespace mpnormal {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

ValidationReport validate_block(const Block& block, double tol) {
  const Matrix& a = block.A();
  const Matrix& w = block.W();
  const auto dim = static_cast<Eigen::Index>(block.dim());
  ValidationReport r;

  const double a_norm = operator_norm(a);
  const double scale = std::max(1.0, a_norm);

  r.hermitian_defect = hermitian_defect(a);
  // The Hermitian part always has a real spectrum, even when A itself is off.
  const Matrix herm = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  r.positivity_margin = es.eigenvalues()(0) - 1.0;
  r.unitarity_defect = operator_norm(w.adjoint() * w - Matrix::Identity(dim, dim));
  r.commutation_defect = operator_norm(w * a - a * w);
  r.interval_ok = std::isfinite(block.length()) && block.length() > 0.0;

  if (r.hermitian_defect > tol * scale) r.reasons.push_back("A is not Hermitian: |A - A*| = " + fmt(r.hermitian_defect));
  if (r.positivity_margin < -tol * scale) {
    r.reasons.push_back("A has an eigenvalue below 1: min eig - 1 = " + fmt(r.positivity_margin));
  }
  if (r.unitarity_defect > tol) r.reasons.push_back("W is not unitary: |W*W - I| = " + fmt(r.unitarity_defect));
  if (r.commutation_defect > tol * scale) {
    r.reasons.push_back("W does not commute with A: |WA - AW| = " + fmt(r.commutation_defect));
  }
  if (!r.interval_ok) r.reasons.push_back("interval has no positive finite length");
  r.valid = r.reasons.empty();
  return r;
}

std::vector<ModePair> simultaneous_eigenbasis(const Block& block, double residual_tol, double cluster_rel) {
  const Matrix& a = block.A();
  const Matrix& w = block.W();
  const auto dim = static_cast<Eigen::Index>(block.dim());
  const double scale = std::max(1.0, operator_norm(a));

  const auto eig = hermitian_eigendecomposition(a, 1e-6);
  const double cluster_gap = cluster_rel * scale;

  struct Entry {
    ModePair pair;
    Eigen::Index cluster;
    double arg;
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(dim));

  Eigen::Index start = 0;
  Eigen::Index cluster = 0;
  while (start < dim) {
    Eigen::Index stop = start + 1;
    while (stop < dim && eig.values(stop) - eig.values(stop - 1) <= cluster_gap) ++stop;
    const Eigen::Index width = stop - start;
    const Matrix basis = eig.vectors.middleCols(start, width);

    // W restricted to the A-eigenspace is unitary, hence normal: its complex
    // Schur form is diagonal and the Schur vectors are orthonormal.
    const Matrix restricted = basis.adjoint() * w * basis;
    Eigen::ComplexSchur<Matrix> schur(restricted);
    const Matrix vectors = basis * schur.matrixU();

    for (Eigen::Index j = 0; j < width; ++j) {
      Vector v = vectors.col(j);
      v.normalize();
      const Complex omega = v.dot(w * v);
      const double alpha = v.dot(a * v).real();
      entries.push_back({ModePair{alpha, omega, v, 0}, cluster, principal_arg(omega)});
    }
    start = stop;
    ++cluster;
  }

  std::stable_sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    if (x.cluster != y.cluster) return x.cluster < y.cluster;
    return x.arg < y.arg;
  });

  std::vector<ModePair> out;
  out.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    ModePair p = std::move(entries[i].pair);
    p.m = i + 1;
    const double res_a = (a * p.vector - p.alpha * p.vector).norm();
    const double res_w = (w * p.vector - p.omega * p.vector).norm();
    if (res_a > residual_tol * scale || res_w > residual_tol || std::abs(std::abs(p.omega) - 1.0) > residual_tol) {
      std::ostringstream os;
      os << "mode " << p.m << ": |Av - alpha v| = " << res_a << ", |Wv - omega v| = " << res_w
         << ", |omega| = " << std::abs(p.omega);
      throw Error(ErrorCode::CommutationViolated, os.str());
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace mpnormal
