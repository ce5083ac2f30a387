#include "mpnormal/schatten.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "mpnormal/error.hpp"

namespace mpnormal {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Partial sum of a model series over n = 1..count, for evidence only.
double model_partial_sum(std::size_t count, const std::function<double(std::size_t)>& term) {
  CompensatedSum s;
  for (std::size_t n = count; n >= 1; --n) s.add(term(n));
  return s.value();
}

double min_eigenvalue(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::converges: return "converges";
    case Verdict::diverges: return "diverges";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

const char* to_string(DiscreteVerdict v) noexcept {
  switch (v) {
    case DiscreteVerdict::criterion_satisfied: return "criterion_satisfied";
    case DiscreteVerdict::criterion_fails: return "criterion_fails";
    case DiscreteVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::vector<double> singular_values_inverse(const SpectrumSlice& slice) {
  if (slice.records.empty()) throw Error(ErrorCode::EmptySpectrum, "no eigenvalues in slice");
  std::vector<double> mu;
  mu.reserve(slice.records.size());
  for (const auto& r : slice.records) mu.push_back(1.0 / std::abs(r.lambda));
  std::sort(mu.begin(), mu.end(), std::greater<>());
  return mu;
}

double schatten_partial_sum(std::span<const double> mu, double p) {
  if (!(p >= 1.0)) throw Error(ErrorCode::BadExponent, "p must be >= 1");
  CompensatedSum s;
  for (auto it = mu.rbegin(); it != mu.rend(); ++it) {
    if (!(*it > 0.0)) throw Error(ErrorCode::InvalidArgument, "singular values must be positive");
    s.add(std::pow(*it, p));
  }
  return s.value();
}

double tail_bound(double alpha, double length, long k_max, double p) {
  if (!(p > 1.0)) throw Error(ErrorCode::DivergentTail, "k-series diverges for p <= 1");
  if (!(alpha > 0.0) || !(length > 0.0) || k_max < 1) {
    throw Error(ErrorCode::InvalidArgument, "tail_bound needs alpha > 0, length > 0, k_max >= 1");
  }
  const double y0 = (2.0 * kPi * static_cast<double>(k_max) - kPi) / length;
  return 2.0 * (length / (2.0 * kPi)) * std::pow(y0, 1.0 - p) / (p - 1.0);
}

MembershipVerdict schatten_membership(const Instance& instance, double p, long k_max,
                                      const std::optional<GrowthModel>& growth_model, const Tolerances& tol) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorCode::BadExponent, "p must be a finite real >= 1");
  if (k_max < 1) throw Error(ErrorCode::InvalidArgument, "k_max must be >= 1");

  MembershipVerdict out;
  const SpectrumSlice slice = operator_spectrum(instance, k_max, tol);
  out.series.p = p;
  out.series.mu = singular_values_inverse(slice);
  out.series.partial_sum = schatten_partial_sum(out.series.mu, p);
  out.series.mode_tail_note = growth_model.has_value() || !slice.complete_modes;
  out.evidence.push_back({"partial_sum", "sum of mu^p over |k| <= " + std::to_string(k_max), out.series.partial_sum});

  // Finite instance: one k-series per (block, mode).
  bool finite_converges = p > 1.0;
  if (finite_converges) {
    CompensatedSum tail;
    for (const auto& block : instance.blocks()) {
      for (const auto& mode : simultaneous_eigenbasis(block, tol.mode_residual, tol.cluster)) {
        tail.add(tail_bound(mode.alpha, block.length(), k_max, p));
      }
    }
    out.series.tail_bound = tail.value();
    out.evidence.push_back({"tail_bound", "certified bound on |k| > " + std::to_string(k_max), out.series.tail_bound});
  } else {
    out.series.tail_bound = kInf;
    const Block& block = instance.block(0);
    const auto modes = simultaneous_eigenbasis(block, tol.mode_residual, tol.cluster);
    const double alpha = modes.front().alpha;
    const double c = 1.0 / std::hypot(alpha, 3.0 * kPi / block.length());
    out.evidence.push_back({"harmonic_minorant",
                            "block 1 mode 1: mu_k >= c / |k| for |k| >= 1, c = 1 / sqrt(alpha^2 + 9 pi^2 / l^2)", c});
  }

  if (!growth_model) {
    out.verdict = finite_converges ? Verdict::converges : Verdict::diverges;
    return out;
  }

  const GrowthModel& model = *growth_model;
  model.validate();
  const double shortest = instance.min_length();
  const Sequence lengths = model.lengths.value_or(Sequence::constant(shortest));

  // Agreement of the model with the finite instance it is meant to extend.
  for (std::size_t n = 1; n <= instance.size(); ++n) {
    const Block& block = instance.block(n - 1);
    const double l1 = min_eigenvalue(block.A());
    const double expected = model.lambda1.value(n);
    if (std::abs(l1 - expected) > tol.validation * std::max(1.0, expected) * 1e3) {
      out.evidence.push_back({"model_mismatch", "block " + std::to_string(n) + " lambda_1 = " + num(l1) +
                                                    " but the model gives " + num(expected),
                              l1 - expected});
    }
  }

  const auto lam = model.lambda1.asymptotic();
  const auto dim = model.dims.asymptotic();
  const auto len = lengths.asymptotic();

  // Comparison with sum_{n,m} lambda_m(A_n)^{-p/2} <= sum_n d_n lambda_1(n)^{-p/2}.
  const PowerLaw majorant{dim.coefficient, dim.exponent - 0.5 * p * lam.exponent};
  const bool majorant_converges = p > 2.0 && power_series_converges(majorant);
  out.evidence.push_back({"majorant_exponent", "d_n lambda_1(n)^{-p/2} ~ n^e", majorant.exponent});
  out.evidence.push_back({"majorant_partial_sum_1e4", "sum_{n <= 1e4} d_n lambda_1(n)^{-p/2}",
                          model_partial_sum(10000, [&](std::size_t n) {
                            return model.dims.value(n) * std::pow(model.lambda1.value(n), -0.5 * p);
                          })});

  // k = 0 term of every (scalar) mode, with the worst phase |delta| = pi.
  const double count_exponent = model.scalar_blocks ? dim.exponent : 0.0;
  const PowerLaw minorant{1.0, count_exponent - p * std::max(lam.exponent, -len.exponent)};
  const bool minorant_diverges = !power_series_converges(minorant);
  out.evidence.push_back({"minorant_exponent", "c_n (lambda_1(n)^2 + pi^2 / l_n^2)^{-p/2} ~ n^e", minorant.exponent});
  out.evidence.push_back({"minorant_partial_sum_1e4", "sum_{n <= 1e4} c_n (lambda_1(n)^2 + pi^2 / l_n^2)^{-p/2}",
                          model_partial_sum(10000, [&](std::size_t n) {
                            const double c = model.scalar_blocks ? std::floor(model.dims.value(n)) : 1.0;
                            return c * std::pow(std::hypot(model.lambda1.value(n), kPi / lengths.value(n)), -p);
                          })});
  if (!model.lengths) {
    out.evidence.push_back({"assumed_lengths", "family intervals no shorter than the shortest instance interval", shortest});
  }

  if (!finite_converges || minorant_diverges) {
    out.verdict = Verdict::diverges;
  } else if (majorant_converges) {
    out.verdict = Verdict::converges;
  } else {
    out.verdict = Verdict::inconclusive;
  }
  return out;
}

double coefficient_resolvent_norm(const Block& block, Complex probe) {
  const auto dim = static_cast<Eigen::Index>(block.dim());
  const Matrix shifted = block.A() - probe * Matrix::Identity(dim, dim);
  Eigen::JacobiSVD<Matrix> svd(shifted);
  const double smin = svd.singularValues()(dim - 1);
  if (!(smin > 0.0)) throw Error(ErrorCode::ProbeInSpectrum, "A - lambda I is singular");
  return 1.0 / smin;
}

double spectral_distance(const Block& block, Complex probe, ResolventTarget target, const Tolerances& tol) {
  double dist = kInf;
  if (target == ResolventTarget::coefficient) {
    const auto eig = hermitian_eigendecomposition(block.A(), 1e-6);
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) dist = std::min(dist, std::abs(probe - eig.values(i)));
  } else {
    const double a = block.interval().a();
    const double b = block.interval().b();
    for (const auto& mode : simultaneous_eigenbasis(block, tol.mode_residual, tol.cluster)) {
      const double delta = principal_arg(std::conj(mode.omega));
      // Im lambda_k = (delta + 2 k pi) / (a - b); the nearest k brackets the real solution.
      const double k_real = (probe.imag() * (a - b) - delta) / (2.0 * kPi);
      for (double k : {std::floor(k_real), std::ceil(k_real)}) {
        const Complex lambda(mode.alpha, (delta + 2.0 * k * kPi) / (a - b));
        dist = std::min(dist, std::abs(probe - lambda));
      }
    }
  }
  if (!(dist > 1e-14 * std::max(1.0, std::abs(probe)))) {
    throw Error(ErrorCode::ProbeInSpectrum, "probe lies in the spectrum of a block");
  }
  return dist;
}

DiscreteSpectrumReport discrete_spectrum_check(const Instance& instance,
                                               const std::optional<GrowthModel>& growth_model, Complex probe,
                                               ResolventTarget target, const Tolerances& tol) {
  DiscreteSpectrumReport out;
  for (const auto& block : instance.blocks()) {
    out.resolvent_norms.push_back(1.0 / spectral_distance(block, probe, target, tol));
  }
  const auto& r = out.resolvent_norms;
  bool non_increasing = true;
  for (std::size_t i = 1; i < r.size(); ++i) non_increasing = non_increasing && r[i] <= r[i - 1];
  out.decreasing = r.size() > 1 && non_increasing && r.back() < r.front();

  if (r.size() == 1) {
    out.truncation_verdict = DiscreteVerdict::criterion_satisfied;
    out.evidence.push_back({"single_block", "a finite-dimensional block always has discrete spectrum", r.front()});
  } else if (out.decreasing) {
    out.truncation_verdict = DiscreteVerdict::criterion_satisfied;
  } else if (*std::min_element(r.begin(), r.end()) >= r.front()) {
    out.truncation_verdict = DiscreteVerdict::criterion_fails;
  } else {
    out.truncation_verdict = DiscreteVerdict::inconclusive;
  }
  out.evidence.push_back({"last_resolvent_norm", "|R_lambda| on the last block", r.back()});

  if (growth_model) {
    growth_model->validate();
    const auto lam = growth_model->lambda1.asymptotic();
    out.evidence.push_back({"lambda1_exponent", "lambda_1(A_n) ~ n^e", lam.exponent});
    // lambda_1 -> inf gives discrete spectrum; bounded lambda_1 over infinitely
    // many blocks of dimension >= 1 is the identity-family pattern.
    out.model_verdict = lam.exponent > 0.0 ? DiscreteVerdict::criterion_satisfied : DiscreteVerdict::criterion_fails;
  }
  return out;
}

TruncationError truncation_error(const Instance& instance, Complex probe, std::size_t m) {
  if (m < 1 || m >= instance.size()) {
    throw Error(ErrorCode::InvalidArgument, "truncation index m must satisfy 1 <= m < block count");
  }
  Eigen::Index total = 0;
  for (std::size_t n = m; n < instance.size(); ++n) total += static_cast<Eigen::Index>(instance.block(n).dim());

  // K_m - K is block diagonal with -R_lambda(A_n) for n > m and zeros elsewhere.
  Matrix diff = Matrix::Zero(total, total);
  TruncationError out;
  Eigen::Index offset = 0;
  for (std::size_t n = m; n < instance.size(); ++n) {
    const Block& block = instance.block(n);
    const auto dim = static_cast<Eigen::Index>(block.dim());
    const Matrix shifted = block.A() - probe * Matrix::Identity(dim, dim);
    diff.block(offset, offset, dim, dim) = -shifted.inverse();
    offset += dim;
    out.bound = std::max(out.bound, 1.0 / spectral_distance(block, probe));
  }
  out.exact = operator_norm(diff);
  return out;
}

}  // namespace mpnormal
