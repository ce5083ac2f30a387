#include "mpnormal/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "mpnormal/error.hpp"

namespace mpnormal {

namespace {

constexpr double kPi = std::numbers::pi;

double arg_distance(double x, double y) {
  double d = std::fmod(std::abs(x - y), 2.0 * kPi);
  return std::min(d, 2.0 * kPi - d);
}

}  // namespace

std::vector<EigenvalueRecord> block_eigenvalues(const Block& block, std::span<const ModePair> modes, long k_max,
                                                std::size_t block_index) {
  if (k_max < 0) throw Error(ErrorCode::InvalidArgument, "k_max must be >= 0");
  const double a = block.interval().a();
  const double b = block.interval().b();
  const double len = b - a;

  std::vector<EigenvalueRecord> out;
  out.reserve(modes.size() * static_cast<std::size_t>(2 * k_max + 1));
  for (const auto& mode : modes) {
    // Phase of the m-th eigenvalue of W* e^{-A (b - a)} on the shared eigenvector.
    const Complex product = std::conj(mode.omega) * std::exp(-mode.alpha * len);
    const double delta = principal_arg(product);
    // The positive factor cannot move the phase.
    if (arg_distance(delta, principal_arg(std::conj(mode.omega))) > 16.0 * std::numeric_limits<double>::epsilon()) {
      throw std::logic_error("phase of conj(omega) e^{-alpha l} differs from arg conj(omega)");
    }
    for (long k = -k_max; k <= k_max; ++k) {
      const double im = (delta + 2.0 * static_cast<double>(k) * kPi) / (a - b) + 0.0;
      out.push_back({Complex(mode.alpha, im), block_index, mode.m, k, delta});
    }
  }
  return out;
}

SpectrumSlice operator_spectrum(const Instance& instance, long k_max, const Tolerances& tol,
                                std::optional<std::size_t> m_max) {
  SpectrumSlice slice;
  slice.k_max = k_max;
  std::size_t max_dim = 0;
  for (const auto& b : instance.blocks()) max_dim = std::max(max_dim, b.dim());
  slice.m_max = m_max.value_or(max_dim);
  slice.complete_modes = slice.m_max >= max_dim;

  for (std::size_t n = 0; n < instance.size(); ++n) {
    const Block& block = instance.block(n);
    const auto report = validate_block(block, tol.validation);
    if (!report.valid) {
      std::ostringstream os;
      os << "block " << n + 1 << ":";
      for (const auto& r : report.reasons) os << " " << r << ";";
      throw Error(ErrorCode::InvalidBlock, os.str());
    }
    auto modes = simultaneous_eigenbasis(block, tol.mode_residual, tol.cluster);
    if (modes.size() > slice.m_max) modes.resize(slice.m_max);
    auto records = block_eigenvalues(block, modes, k_max, n + 1);
    slice.records.insert(slice.records.end(), records.begin(), records.end());
    slice.block_lengths.push_back(block.length());
  }

  std::stable_sort(slice.records.begin(), slice.records.end(), [](const EigenvalueRecord& x, const EigenvalueRecord& y) {
    const double ax = std::abs(x.lambda);
    const double ay = std::abs(y.lambda);
    if (ax != ay) return ax < ay;
    if (x.block_index != y.block_index) return x.block_index < y.block_index;
    if (x.mode_index != y.mode_index) return x.mode_index < y.mode_index;
    return x.k < y.k;
  });
  return slice;
}

StructureReport verify_normal_spectrum_structure(const SpectrumSlice& slice, double tol) {
  StructureReport report;
  auto fail = [&report](const std::string& line) {
    report.pass = false;
    report.failures.push_back(line);
  };
  if (slice.records.empty()) {
    fail("empty slice");
    return report;
  }

  std::map<std::pair<std::size_t, std::size_t>, std::vector<const EigenvalueRecord*>> groups;
  for (const auto& r : slice.records) {
    if (r.lambda.real() < 1.0 - tol) {
      std::ostringstream os;
      os << "block " << r.block_index << " mode " << r.mode_index << " k " << r.k << ": Re lambda = " << r.lambda.real()
         << " < 1";
      fail(os.str());
    }
    groups[{r.block_index, r.mode_index}].push_back(&r);
  }

  for (auto& [key, recs] : groups) {
    const auto [n, m] = key;
    if (n == 0 || n > slice.block_lengths.size()) {
      fail("block " + std::to_string(n) + " has no recorded interval length");
      continue;
    }
    const double gap = 2.0 * kPi / slice.block_lengths[n - 1];
    std::sort(recs.begin(), recs.end(), [](auto* x, auto* y) { return x->k < y->k; });
    for (std::size_t i = 1; i < recs.size(); ++i) {
      const auto& prev = *recs[i - 1];
      const auto& cur = *recs[i];
      std::ostringstream os;
      os << "block " << n << " mode " << m << " k " << cur.k << ": ";
      if (cur.k == prev.k) {
        os << "duplicate Fourier index";
        fail(os.str());
        continue;
      }
      const double steps = static_cast<double>(cur.k - prev.k);
      const double expected = -gap * steps;
      const double got = cur.lambda.imag() - prev.lambda.imag();
      const double scale = std::max({1.0, std::abs(cur.lambda.imag()), std::abs(prev.lambda.imag())});
      if (std::abs(got - expected) > tol * scale) {
        os << "Im step " << got << " from k " << prev.k << ", expected " << expected;
        fail(os.str());
      }
      if (std::abs(cur.lambda.real() - prev.lambda.real()) > tol * std::max(1.0, std::abs(cur.lambda.real()))) {
        os << "real part " << cur.lambda.real() << " differs within the mode (" << prev.lambda.real() << ")";
        fail(os.str());
      }
      if (cur.lambda == prev.lambda) {
        os << "k -> lambda not injective";
        fail(os.str());
      }
    }
  }
  return report;
}

}  // namespace mpnormal
