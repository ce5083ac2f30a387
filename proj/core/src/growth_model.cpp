#include "mpnormal/growth_model.hpp"

#include <cmath>
#include <string>

#include "mpnormal/error.hpp"

namespace mpnormal {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

}  // namespace

Sequence Sequence::constant(double value) {
  require(std::isfinite(value), "constant sequence needs a finite value");
  return Sequence(Kind::constant, value, 0.0);
}

Sequence Sequence::linear(double slope, double intercept) {
  require(std::isfinite(slope) && std::isfinite(intercept), "linear sequence needs finite parameters");
  require(slope >= 0.0, "linear sequence needs slope >= 0");
  return Sequence(Kind::linear, slope, intercept);
}

Sequence Sequence::power(double coefficient, double exponent) {
  require(std::isfinite(coefficient) && std::isfinite(exponent), "power sequence needs finite parameters");
  require(coefficient > 0.0, "power sequence needs coefficient > 0");
  return Sequence(Kind::power, coefficient, exponent);
}

Sequence Sequence::table(std::vector<double> values, Sequence tail) {
  require(!values.empty(), "table sequence needs at least one value");
  for (double v : values) require(std::isfinite(v), "table sequence needs finite values");
  Sequence s(Kind::table, 0.0, 0.0);
  s.values_ = std::move(values);
  s.tail_.push_back(std::move(tail));
  return s;
}

double Sequence::value(std::size_t n) const {
  require(n >= 1, "sequences are indexed from n = 1");
  const auto x = static_cast<double>(n);
  switch (kind_) {
    case Kind::constant: return p0_;
    case Kind::linear: return p0_ * x + p1_;
    case Kind::power: return p0_ * std::pow(x, p1_);
    case Kind::table: return n <= values_.size() ? values_[n - 1] : tail_.front().value(n);
  }
  return 0.0;
}

PowerLaw Sequence::asymptotic() const {
  switch (kind_) {
    case Kind::constant: return {p0_, 0.0};
    case Kind::linear: return p0_ > 0.0 ? PowerLaw{p0_, 1.0} : PowerLaw{p1_, 0.0};
    case Kind::power: return {p0_, p1_};
    case Kind::table: return tail_.front().asymptotic();
  }
  return {};
}

const char* to_string(Sequence::Kind kind) noexcept {
  switch (kind) {
    case Sequence::Kind::constant: return "constant";
    case Sequence::Kind::linear: return "linear";
    case Sequence::Kind::power: return "power";
    case Sequence::Kind::table: return "table";
  }
  return "unknown";
}

void GrowthModel::validate() const {
  // Explicit range: every table entry plus a short prefix of the closed forms.
  auto check_range = [](const Sequence& s, auto&& ok, const char* what) {
    std::size_t upto = 64;
    if (s.kind() == Sequence::Kind::table) upto = s.values().size() + 64;
    for (std::size_t n = 1; n <= upto; ++n) {
      if (!ok(s.value(n))) throw Error(ErrorCode::InvalidArgument, std::string(what) + " violated at n = " + std::to_string(n));
    }
  };
  check_range(lambda1, [](double v) { return v >= 1.0; }, "lambda1 >= 1");
  check_range(dims, [](double v) { return v >= 1.0; }, "dims >= 1");
  if (lengths) check_range(*lengths, [](double v) { return v > 0.0; }, "lengths > 0");

  const auto l1 = lambda1.asymptotic();
  require(l1.coefficient > 0.0 && l1.exponent >= 0.0, "lambda1 must stay >= 1 asymptotically");
  if (l1.exponent == 0.0) require(l1.coefficient >= 1.0, "lambda1 must stay >= 1 asymptotically");
  const auto d = dims.asymptotic();
  require(d.coefficient > 0.0 && d.exponent >= 0.0, "dims must stay >= 1 asymptotically");
  if (lengths) {
    const auto l = lengths->asymptotic();
    require(l.coefficient > 0.0 && l.exponent <= 0.0, "lengths must stay positive and bounded");
  }
}

bool power_series_converges(const PowerLaw& law) noexcept { return law.exponent < -1.0; }

}  // namespace mpnormal
