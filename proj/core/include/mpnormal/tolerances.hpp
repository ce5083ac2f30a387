#pragma once

#include <map>
#include <string>
#include <string_view>

namespace mpnormal {

/// Central table of numerical tolerances. Every entry can be overridden per run
/// (instance file "tolerances" section or --tol name=value on the command line).
///
///   name               default  meaning
///   validation         1e-10    Hermitian / unitarity / commutation defects, relative to max(1, |A|)
///   cluster            1e-8     relative gap below which A-eigenvalues share an eigenspace
///   mode_residual      1e-9     |Av - alpha v| and |Wv - omega v| for joint eigenvectors
///   set_distance       1e-10    Hausdorff distance between formula and oracle spectra
///   char_residual      1e-8     scaled characteristic determinant at a formula eigenvalue
///   fd_match           5e-3     distance between finite-difference and exact eigenvalues
///   quadrature         1e-6     norm identity discrepancy under trapezoid quadrature
///   gram               1e-8     off-diagonal eigenfunction Gram entries
///   boundary           1e-10    boundary form mismatch scaled by |A| |u0|^2
struct Tolerances {
  double validation = 1e-10;
  double cluster = 1e-8;
  double mode_residual = 1e-9;
  double set_distance = 1e-10;
  double char_residual = 1e-8;
  double fd_match = 5e-3;
  double quadrature = 1e-6;
  double gram = 1e-8;
  double boundary = 1e-10;

  /// Multiplies every entry by `factor`.
  [[nodiscard]] Tolerances scaled(double factor) const;

  /// Sets one entry by name; throws Error(InvalidArgument) for unknown names or
  /// non-positive values.
  void set(std::string_view name, double value);

  [[nodiscard]] std::map<std::string, double> as_map() const;

  bool operator==(const Tolerances&) const = default;
};

/// Profiles: "default" (x1), "strict" (x0.1), "loose" (x10).
Tolerances tolerance_profile(std::string_view name);

/// Profile named by the MPNORMAL_TOL_PROFILE environment variable, or the
/// default table when it is unset.
Tolerances tolerances_from_environment();

inline constexpr const char* kToleranceProfileEnv = "MPNORMAL_TOL_PROFILE";

}  // namespace mpnormal
