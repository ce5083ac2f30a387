#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace mpnormal {

/// Leading-order behaviour value(n) ~ coefficient * n^exponent as n -> inf.
struct PowerLaw {
  double coefficient = 1.0;
  double exponent = 0.0;
};

/// Named sequence n -> value (n >= 1) describing a family beyond the finite
/// instance.
///   constant: value
///   linear:   slope * n + intercept          (slope >= 0)
///   power:    coefficient * n^exponent       (coefficient > 0)
///   table:    explicit values for n = 1..T, then `tail` for n > T
class Sequence {
 public:
  enum class Kind { constant, linear, power, table };

  static Sequence constant(double value);
  static Sequence linear(double slope, double intercept);
  static Sequence power(double coefficient, double exponent);
  static Sequence table(std::vector<double> values, Sequence tail);

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] double value(std::size_t n) const;
  [[nodiscard]] PowerLaw asymptotic() const;

  // Raw parameters, for serialization.
  [[nodiscard]] double p0() const noexcept { return p0_; }
  [[nodiscard]] double p1() const noexcept { return p1_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
  [[nodiscard]] const Sequence* tail() const noexcept { return tail_.empty() ? nullptr : &tail_.front(); }

  bool operator==(const Sequence&) const = default;

 private:
  Sequence(Kind kind, double p0, double p1) : kind_(kind), p0_(p0), p1_(p1) {}

  Kind kind_;
  double p0_ = 0.0;
  double p1_ = 0.0;
  std::vector<double> values_;
  std::vector<Sequence> tail_;  // zero or one element
};

const char* to_string(Sequence::Kind kind) noexcept;

/// Analytic description of the untruncated family: smallest coefficient
/// eigenvalue lambda_1(A_n), block dimension d_n and optionally interval length
/// l_n. When `scalar_blocks` is set, A_n = lambda_1(A_n) I on every block.
///
/// Without `lengths`, the family is assumed to keep intervals no shorter than
/// the shortest interval of the finite instance.
struct GrowthModel {
  Sequence lambda1 = Sequence::constant(1.0);
  Sequence dims = Sequence::constant(1.0);
  std::optional<Sequence> lengths;
  bool scalar_blocks = false;

  /// Throws Error(InvalidArgument) when lambda1 < 1, dims < 1, lengths <= 0
  /// anywhere in the explicit range, or the asymptotics violate the same bounds
  /// (lambda1 decaying, lengths growing without bound).
  void validate() const;

  bool operator==(const GrowthModel&) const = default;
};

/// Sum over n of a term behaving like law: finite iff exponent < -1 (limit
/// comparison with n^exponent).
bool power_series_converges(const PowerLaw& law) noexcept;

}  // namespace mpnormal
