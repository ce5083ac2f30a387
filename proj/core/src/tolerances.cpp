#include "mpnormal/tolerances.hpp"

#include <cmath>
#include <cstdlib>

#include "mpnormal/error.hpp"

namespace mpnormal {

namespace {

template <typename Fn>
void for_each_entry(Tolerances& t, Fn&& fn) {
  fn("validation", t.validation);
  fn("cluster", t.cluster);
  fn("mode_residual", t.mode_residual);
  fn("set_distance", t.set_distance);
  fn("char_residual", t.char_residual);
  fn("fd_match", t.fd_match);
  fn("quadrature", t.quadrature);
  fn("gram", t.gram);
  fn("boundary", t.boundary);
}

}  // namespace

Tolerances Tolerances::scaled(double factor) const {
  Tolerances out = *this;
  for_each_entry(out, [factor](std::string_view, double& v) { v *= factor; });
  return out;
}

void Tolerances::set(std::string_view name, double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(ErrorCode::InvalidArgument, "tolerance '" + std::string(name) + "' must be positive and finite");
  }
  bool found = false;
  for_each_entry(*this, [&](std::string_view key, double& v) {
    if (key == name) {
      v = value;
      found = true;
    }
  });
  if (!found) throw Error(ErrorCode::InvalidArgument, "unknown tolerance '" + std::string(name) + "'");
}

std::map<std::string, double> Tolerances::as_map() const {
  std::map<std::string, double> out;
  Tolerances copy = *this;
  for_each_entry(copy, [&](std::string_view key, double& v) { out.emplace(std::string(key), v); });
  return out;
}

Tolerances tolerance_profile(std::string_view name) {
  if (name.empty() || name == "default") return Tolerances{};
  if (name == "strict") return Tolerances{}.scaled(0.1);
  if (name == "loose") return Tolerances{}.scaled(10.0);
  throw Error(ErrorCode::InvalidArgument, "unknown tolerance profile '" + std::string(name) + "'");
}

Tolerances tolerances_from_environment() {
  const char* env = std::getenv(kToleranceProfileEnv);
  return tolerance_profile(env ? std::string_view(env) : std::string_view{});
}

}  // namespace mpnormal
