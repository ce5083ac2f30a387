#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "mpnormal/linalg.hpp"

namespace mpnormal {

struct ArnoldiOptions {
  std::size_t max_dim = 400;       // Krylov dimension cap
  double tol = 1e-12;              // relative Ritz residual for acceptance
  std::uint64_t seed = 0x5eedULL;  // start vector
};

/// `count` eigenvalues of largest magnitude of the linear map `apply` on C^n,
/// by Arnoldi with full reorthogonalization. Sorted by descending magnitude.
/// Throws Error(InvalidArgument) if the Ritz values do not converge within
/// max_dim steps.
std::vector<Complex> largest_magnitude_eigenvalues(const std::function<Vector(const Vector&)>& apply, Eigen::Index n,
                                                   std::size_t count, const ArnoldiOptions& options = {});

}  // namespace mpnormal
