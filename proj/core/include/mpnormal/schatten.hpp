#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mpnormal/block.hpp"
#include "mpnormal/growth_model.hpp"
#include "mpnormal/spectrum.hpp"
#include "mpnormal/tolerances.hpp"

namespace mpnormal {

/// Singular values of the inverse of a normal operator are 1/|lambda_q|.
/// Returned in descending order. Throws Error(EmptySpectrum) on an empty slice.
std::vector<double> singular_values_inverse(const SpectrumSlice& slice);

/// Sum of mu^p with Neumaier compensation, accumulated from the smallest term up
/// (mu is expected in descending order).
double schatten_partial_sum(std::span<const double> mu, double p);

/// Certified upper bound, uniform in delta, on
///
///   sum_{|k| > k_max} (alpha^2 + (delta + 2 k pi)^2 / length^2)^{-p/2}.
///
/// For |k| >= 1, |delta + 2 k pi| >= (2|k| - 1) pi, and the terms are bounded by
/// a decreasing function of |k|; comparing with its integral from k_max gives
///
///   2 (length / 2pi) ((2 pi k_max - pi) / length)^{1-p} / (p - 1).
///
/// Throws Error(DivergentTail) for p <= 1 and Error(InvalidArgument) unless
/// alpha > 0, length > 0 and k_max >= 1.
double tail_bound(double alpha, double length, long k_max, double p);

struct SingularValueSeries {
  std::vector<double> mu;  // descending
  double p = 2.0;
  double partial_sum = 0.0;
  double tail_bound = 0.0;      // +inf when the k-series diverges
  bool mode_tail_note = false;  // blocks or modes beyond the instance are not enumerated

  [[nodiscard]] double total() const noexcept { return partial_sum + tail_bound; }
};

enum class Verdict { converges, diverges, inconclusive };
const char* to_string(Verdict v) noexcept;

struct EvidenceItem {
  std::string kind;
  std::string detail;
  double value = 0.0;
};

struct MembershipVerdict {
  Verdict verdict = Verdict::inconclusive;
  SingularValueSeries series;
  std::vector<EvidenceItem> evidence;
};

/// Whether the inverse lies in the Schatten class C_p.
///
/// On the finite instance only the k-series per mode is infinite; it converges
/// iff p > 1 (p = 1 is witnessed by a harmonic minorant). A growth model
/// extends the verdict to the untruncated family:
///   converges    p > 2 and sum_n d_n lambda_1(n)^{-p/2} < inf (lambda_m >= lambda_1);
///   diverges     the k = 0 minorant sum_n c_n (lambda_1(n)^2 + pi^2 / l_n^2)^{-p/2}
///                diverges (c_n = d_n for scalar blocks, else 1);
///   inconclusive otherwise. Partial sums are never extrapolated.
///
/// Throws Error(BadExponent) for p < 1 and Error(InvalidArgument) for k_max < 1.
MembershipVerdict schatten_membership(const Instance& instance, double p, long k_max,
                                      const std::optional<GrowthModel>& growth_model = std::nullopt,
                                      const Tolerances& tol = {});

/// Which block operators a resolvent probe is applied to: the coefficient
/// matrices A_n, or the differential operators u' + A_n u with u(b) = W_n u(a).
enum class ResolventTarget { coefficient, extension };

enum class DiscreteVerdict { criterion_satisfied, criterion_fails, inconclusive };
const char* to_string(DiscreteVerdict v) noexcept;

struct DiscreteSpectrumReport {
  std::vector<double> resolvent_norms;  // |R_lambda(block_n)| = 1 / dist(lambda, sigma(block_n))
  bool decreasing = false;              // non-increasing with last < first
  DiscreteVerdict truncation_verdict = DiscreteVerdict::inconclusive;
  std::optional<DiscreteVerdict> model_verdict;  // lambda_1(A_n) -> inf test, when a model is given
  std::vector<EvidenceItem> evidence;
};

/// Distance from probe to the spectrum of one block. Throws
/// Error(ProbeInSpectrum) when the probe hits an eigenvalue.
double spectral_distance(const Block& block, Complex probe, ResolventTarget target = ResolventTarget::coefficient,
                         const Tolerances& tol = {});

/// |(A - probe I)^{-1}| from singular values, without using normality.
double coefficient_resolvent_norm(const Block& block, Complex probe);

DiscreteSpectrumReport discrete_spectrum_check(const Instance& instance,
                                               const std::optional<GrowthModel>& growth_model, Complex probe,
                                               ResolventTarget target = ResolventTarget::coefficient,
                                               const Tolerances& tol = {});

struct TruncationError {
  double exact = 0.0;  // |K_m - K| of the block-diagonal resolvent, by SVD
  double bound = 0.0;  // sup_{n > m} |R_lambda(A_n)| = sup 1 / dist
};

/// Distance between the resolvent of the direct sum of the coefficient blocks
/// and its truncation K_m that keeps blocks 1..m. Requires 1 <= m < block count.
TruncationError truncation_error(const Instance& instance, Complex probe, std::size_t m);

}  // namespace mpnormal
