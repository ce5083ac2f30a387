#pragma once

#include <cstddef>
#include <vector>

#include "mpnormal/linalg.hpp"

namespace mpnormal {

/// Open subinterval (a, b) of the real line, a < b.
class Interval {
 public:
  /// Throws Error(InvalidArgument) unless a < b and both are finite.
  Interval(double a, double b);

  [[nodiscard]] double a() const noexcept { return a_; }
  [[nodiscard]] double b() const noexcept { return b_; }
  [[nodiscard]] double length() const noexcept { return b_ - a_; }

  bool operator==(const Interval&) const = default;

 private:
  double a_;
  double b_;
};

/// One subinterval's data: the atomic operator u' + A u on (a, b) with the
/// boundary coupling u(b) = W u(a).
///
/// Construction only checks shapes. The analytic hypotheses (A Hermitian with
/// spectrum in [1, inf), W unitary, WA = AW) are checked by validate_block();
/// WA = AW is used in place of W A^{-1} = A^{-1} W, which is equivalent because A
/// is invertible.
class Block {
 public:
  /// Throws Error(DimensionMismatch) unless A and W are square, non-empty and of
  /// equal size.
  Block(Interval interval, Matrix a, Matrix w);

  [[nodiscard]] const Interval& interval() const noexcept { return interval_; }
  [[nodiscard]] const Matrix& A() const noexcept { return a_; }
  [[nodiscard]] const Matrix& W() const noexcept { return w_; }
  [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(a_.rows()); }
  [[nodiscard]] double length() const noexcept { return interval_.length(); }

  bool operator==(const Block& other) const;

 private:
  Interval interval_;
  Matrix a_;
  Matrix w_;
};

/// Ordered, finite truncation of the direct sum. Intervals are pairwise disjoint
/// and increasing (b_n < a_{n+1}); block dimensions may differ.
class Instance {
 public:
  /// Throws Error(InvalidArgument) for an empty list and Error(OrderError) when
  /// intervals overlap or are out of order.
  explicit Instance(std::vector<Block> blocks);

  [[nodiscard]] const std::vector<Block>& blocks() const noexcept { return blocks_; }
  [[nodiscard]] std::size_t size() const noexcept { return blocks_.size(); }
  [[nodiscard]] const Block& block(std::size_t index) const { return blocks_.at(index); }

  /// max over blocks of (b - a).
  [[nodiscard]] double h() const noexcept;
  /// min over blocks of (b - a).
  [[nodiscard]] double min_length() const noexcept;
  /// Sum of block dimensions.
  [[nodiscard]] std::size_t total_dim() const noexcept;

  bool operator==(const Instance&) const = default;

 private:
  std::vector<Block> blocks_;
};

}  // namespace mpnormal
