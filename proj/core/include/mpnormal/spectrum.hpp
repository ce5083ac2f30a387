#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mpnormal/block.hpp"
#include "mpnormal/extension.hpp"
#include "mpnormal/tolerances.hpp"

namespace mpnormal {

/// One eigenvalue of u' + A u, u(b) = W u(a) on block n:
///
///   lambda = alpha_m + i (delta + 2 k pi) / (a - b),
///   delta  = arg(conj(omega_m) e^{-alpha_m (b - a)})  in (-pi, pi].
///
/// Real parts are A-eigenvalues; for fixed (n, m) the imaginary parts step by
/// -2 pi / (b - a) as k increases.
struct EigenvalueRecord {
  Complex lambda;
  std::size_t block_index = 1;  // n, 1-based
  std::size_t mode_index = 1;   // m, 1-based
  long k = 0;
  double delta = 0.0;
};

/// Truncated spectrum: modes m <= m_max of every block, Fourier indices |k| <= k_max.
struct SpectrumSlice {
  std::vector<EigenvalueRecord> records;
  std::size_t m_max = 0;
  long k_max = 0;
  bool complete_modes = true;        // m_max covers every block dimension
  std::vector<double> block_lengths;  // b_n - a_n, indexed by block_index - 1
};

/// Closed-form eigenvalues of one block, mode by mode, for |k| <= k_max, in
/// (m, k) order.
std::vector<EigenvalueRecord> block_eigenvalues(const Block& block, std::span<const ModePair> modes, long k_max,
                                                std::size_t block_index = 1);

/// Union over blocks of block_eigenvalues, sorted by ascending |lambda| with
/// ties broken by block, then mode, then k. Throws Error(InvalidBlock) naming
/// the first block whose validation fails.
SpectrumSlice operator_spectrum(const Instance& instance, long k_max, const Tolerances& tol = {},
                                std::optional<std::size_t> m_max = std::nullopt);

struct StructureReport {
  bool pass = true;
  std::vector<std::string> failures;  // one line per counterexample
};

/// Checks that Re lambda >= 1, that for fixed (n, m) the imaginary parts form
/// an arithmetic progression with gap 2 pi / (b_n - a_n), and that k -> record
/// is injective.
StructureReport verify_normal_spectrum_structure(const SpectrumSlice& slice, double tol = 1e-9);

}  // namespace mpnormal
