#include "mpnormal/direct_sum.hpp"

#include <algorithm>

#include "mpnormal/error.hpp"

namespace mpnormal {

DirectSumNorm direct_sum_norm(std::span<const double> block_norms, const std::optional<Sequence>& norm_model) {
  DirectSumNorm out;
  for (double v : block_norms) {
    if (!(v >= 0.0)) throw Error(ErrorCode::InvalidArgument, "block norms must be nonnegative");
    out.value = std::max(out.value, v);
  }
  if (norm_model) out.certified_bounded = norm_model->asymptotic().exponent <= 0.0;
  return out;
}

std::vector<TaggedEigenvalue> point_spectrum_union(std::span<const std::vector<Complex>> block_spectra) {
  std::vector<TaggedEigenvalue> out;
  for (std::size_t n = 0; n < block_spectra.size(); ++n) {
    for (const auto& v : block_spectra[n]) out.push_back({v, n + 1});
  }
  return out;
}

}  // namespace mpnormal
