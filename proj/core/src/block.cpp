#include "mpnormal/block.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mpnormal/error.hpp"

namespace mpnormal {

Interval::Interval(double a, double b) : a_(a), b_(b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    std::ostringstream os;
    os << "interval (" << a << ", " << b << ") needs finite a < b";
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
}

Block::Block(Interval interval, Matrix a, Matrix w)
    : interval_(interval), a_(std::move(a)), w_(std::move(w)) {
  if (!is_square(a_) || !is_square(w_) || a_.rows() != w_.rows()) {
    std::ostringstream os;
    os << "A is " << a_.rows() << "x" << a_.cols() << ", W is " << w_.rows() << "x" << w_.cols();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

bool Block::operator==(const Block& other) const {
  return interval_ == other.interval_ && a_.rows() == other.a_.rows() && a_ == other.a_ && w_ == other.w_;
}

Instance::Instance(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw Error(ErrorCode::InvalidArgument, "an instance needs at least one block");
  for (std::size_t n = 1; n < blocks_.size(); ++n) {
    const auto& prev = blocks_[n - 1].interval();
    const auto& next = blocks_[n].interval();
    if (!(prev.b() < next.a())) {
      std::ostringstream os;
      os << "block " << n << " (" << prev.a() << ", " << prev.b() << ") and block " << n + 1 << " ("
         << next.a() << ", " << next.b() << ") are not disjoint and increasing";
      throw Error(ErrorCode::OrderError, os.str());
    }
  }
}

double Instance::h() const noexcept {
  double out = 0.0;
  for (const auto& b : blocks_) out = std::max(out, b.length());
  return out;
}

double Instance::min_length() const noexcept {
  double out = blocks_.front().length();
  for (const auto& b : blocks_) out = std::min(out, b.length());
  return out;
}

std::size_t Instance::total_dim() const noexcept {
  std::size_t out = 0;
  for (const auto& b : blocks_) out += b.dim();
  return out;
}

}  // namespace mpnormal
