#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mpnormal/block.hpp"
#include "mpnormal/tolerances.hpp"

namespace mpnormal {

/// Joint eigendata of the commuting pair (A, W): A v = alpha v, W v = omega v.
struct ModePair {
  double alpha = 1.0;
  Complex omega{1.0, 0.0};
  Vector vector;
  std::size_t m = 1;  // 1-based; ascending alpha, ties by ascending arg(omega) in (-pi, pi]
};

/// Defects of a block against the hypotheses that make u(b) = W u(a) a normal
/// extension: A Hermitian with spectrum >= 1, W unitary, WA = AW.
///
/// Defects are absolute operator norms. The verdict compares them with
/// tol * max(1, |A|) (Hermitian, positivity, commutation) and tol (unitarity).
struct ValidationReport {
  double hermitian_defect = 0.0;    // |A - A*|
  double positivity_margin = 0.0;   // min eig(A) - 1
  double unitarity_defect = 0.0;    // |W*W - I|
  double commutation_defect = 0.0;  // |WA - AW|
  bool interval_ok = true;
  bool valid = true;
  std::vector<std::string> reasons;
};

ValidationReport validate_block(const Block& block, double tol = Tolerances{}.validation);

/// Orthonormal joint eigenbasis of (A, W), one ModePair per dimension.
///
/// A-eigenvalues within cluster_rel * max(1, |A|) of their neighbour share an
/// eigenspace; W is diagonalized on each such space. Throws
/// Error(CommutationViolated) if any pair misses residual_tol.
std::vector<ModePair> simultaneous_eigenbasis(const Block& block,
                                              double residual_tol = Tolerances{}.mode_residual,
                                              double cluster_rel = Tolerances{}.cluster);

}  // namespace mpnormal
