#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mpnormal/growth_model.hpp"
#include "mpnormal/linalg.hpp"

namespace mpnormal {

/// Norm of a block-diagonal operator: the supremum of the block norms. On a
/// finite list this is the maximum. `certified_bounded` is filled only when an
/// analytic model of the untruncated block norms is supplied; it is true iff
/// that model stays bounded (exponent <= 0).
struct DirectSumNorm {
  double value = 0.0;
  std::optional<bool> certified_bounded;
};

DirectSumNorm direct_sum_norm(std::span<const double> block_norms,
                              const std::optional<Sequence>& norm_model = std::nullopt);

struct TaggedEigenvalue {
  Complex value;
  std::size_t block = 0;  // 1-based originating block
};

/// Point spectrum of a direct sum: the union of the block spectra, each value
/// tagged with its block. Coincident values from different blocks are all kept.
std::vector<TaggedEigenvalue> point_spectrum_union(std::span<const std::vector<Complex>> block_spectra);

}  // namespace mpnormal
