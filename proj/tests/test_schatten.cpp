#include "doctest.h"
#include "test_support.hpp"

using namespace mpnormal;
using namespace mpnormal::testing;

namespace {

constexpr double kPi = std::numbers::pi;

// Closed form of sum_k 1 / (alpha^2 + (delta + 2 pi k)^2 / l^2).
double p2_closed_form(double alpha, double delta, double l) {
  return (l / (2.0 * alpha)) * std::sinh(alpha * l) / (std::cosh(alpha * l) - std::cos(delta));
}

double brute_tail(double alpha, double delta, double l, long k_lo, long k_hi, double p) {
  double s = 0.0;
  for (long k = k_hi; k > k_lo; --k) {
    for (long sk : {k, -k}) s += std::pow(alpha * alpha + std::pow((delta + 2 * kPi * sk) / l, 2), -0.5 * p);
  }
  return s;
}

Instance scaled_identity_family(int count) {
  std::vector<Block> blocks;
  for (int n = 1; n <= count; ++n) blocks.emplace_back(Interval(2.0 * n, 2.0 * n + 1.0), scalar(double(n)), scalar(1.0));
  return Instance(blocks);
}

Instance identity_family() {
  std::vector<Block> blocks;
  for (int n = 1; n <= 3; ++n) {
    blocks.emplace_back(Interval(2.0 * (n - 1), 2.0 * (n - 1) + 1.0), Matrix::Identity(n, n), Matrix::Identity(n, n));
  }
  return Instance(blocks);
}

GrowthModel identity_model() {
  return {Sequence::constant(1.0), Sequence::linear(1.0, 0.0), Sequence::constant(1.0), true};
}

}  // namespace

TEST_CASE("singular_values_inverse") {
  const auto slice = operator_spectrum(Instance({trivial_block()}), 1);
  const auto mu = singular_values_inverse(slice);
  REQUIRE(mu.size() == 3);
  CHECK(mu[0] == doctest::Approx(1.0));
  CHECK(mu[1] == doctest::Approx(1.0 / std::sqrt(1.0 + 4 * kPi * kPi)));
  CHECK(mu[2] == doctest::Approx(mu[1]));

  SpectrumSlice empty;
  CHECK_THROWS_AS(singular_values_inverse(empty), Error);
}

TEST_CASE("schatten_partial_sum") {
  const std::vector<double> mu{1.0, 0.5, 0.25};
  CHECK(schatten_partial_sum(mu, 1.0) == doctest::Approx(1.75));
  CHECK(schatten_partial_sum(mu, 2.0) == doctest::Approx(1.3125));
  CHECK_THROWS_AS(schatten_partial_sum(mu, 0.5), Error);

  // Many small terms after a large one survive compensation.
  std::vector<double> many(1, 1.0);
  many.insert(many.end(), 1000000, 1e-8);
  CHECK(schatten_partial_sum(many, 1.0) == doctest::Approx(1.01).epsilon(1e-14));
}

TEST_CASE("tail_bound: soundness against brute force") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> ua(1.0, 4.0), ul(0.1, 5.0), ud(-kPi, kPi);
  for (double p : {1.5, 2.0, 3.0}) {
    for (int trial = 0; trial < 30; ++trial) {
      const double alpha = ua(rng), l = ul(rng), delta = ud(rng);
      for (long k_max : {1L, 4L, 16L}) {
        CHECK(brute_tail(alpha, delta, l, k_max, 10 * k_max, p) <= tail_bound(alpha, l, k_max, p));
      }
    }
  }
}

TEST_CASE("tail_bound: shape") {
  // Monotone decreasing in p once the base exceeds one, and in k_max.
  for (long k : {2L, 8L, 64L}) {
    CHECK(tail_bound(1.0, 1.0, k, 3.0) < tail_bound(1.0, 1.0, k, 2.0));
    CHECK(tail_bound(1.0, 1.0, 2 * k, 2.0) < tail_bound(1.0, 1.0, k, 2.0));
  }
  // For p = 2 the bound scales like 1/k_max.
  const double r = tail_bound(1.0, 1.0, 2000, 2.0) / tail_bound(1.0, 1.0, 1000, 2.0);
  CHECK(r == doctest::Approx(0.5).epsilon(1e-3));

  CHECK_THROWS_AS(tail_bound(1.0, 1.0, 4, 1.0), Error);
  try {
    (void)tail_bound(1.0, 1.0, 4, 0.9);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DivergentTail);
  }
  CHECK_THROWS_AS(tail_bound(0.0, 1.0, 4, 2.0), Error);
  CHECK_THROWS_AS(tail_bound(1.0, 1.0, 0, 2.0), Error);
}

TEST_CASE("schatten_membership: trivial block closed form at p = 2") {
  const double exact = 0.5 / std::tanh(0.5);
  CHECK(exact == doctest::Approx(1.08198).epsilon(1e-5));
  const auto v = schatten_membership(Instance({trivial_block()}), 2.0, 1000);
  CHECK(v.verdict == Verdict::converges);
  CHECK(v.series.partial_sum <= exact);
  CHECK(v.series.total() >= exact);
  CHECK(std::abs(v.series.total() - exact) < 1e-6);
}

TEST_CASE("schatten_membership: closed form brackets on random blocks") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    auto built = random_block({.dim = 3, .length = 0.3 + 0.4 * trial}, rng);
    const Block& b = built.block;
    double exact = 0.0;
    for (const auto& m : simultaneous_eigenbasis(b)) exact += p2_closed_form(m.alpha, std::arg(std::conj(m.omega)), b.length());
    const auto v = schatten_membership(Instance({b}), 2.0, 200);
    CHECK(v.series.partial_sum <= exact * (1 + 1e-12));
    CHECK(v.series.total() >= exact * (1 - 1e-12));
  }
}

TEST_CASE("schatten_membership: threshold at p = 1") {
  const Instance inst({trivial_block()});
  const auto v1 = schatten_membership(inst, 1.0, 8);
  CHECK(v1.verdict == Verdict::diverges);
  CHECK(std::isinf(v1.series.tail_bound));
  const bool has_minorant = std::any_of(v1.evidence.begin(), v1.evidence.end(),
                                        [](const EvidenceItem& e) { return e.kind == "harmonic_minorant"; });
  CHECK(has_minorant);
  for (double p : {1.01, 2.0, 4.0}) {
    const auto v = schatten_membership(inst, p, 8);
    CHECK(v.verdict == Verdict::converges);
    CHECK(std::isfinite(v.series.total()));
  }
  CHECK_THROWS_AS(schatten_membership(inst, 0.5, 8), Error);
  CHECK_THROWS_AS(schatten_membership(inst, 2.0, 0), Error);
}

TEST_CASE("schatten_membership: identity family diverges for every p") {
  for (double p : {1.0, 2.0, 4.0, 10.0}) {
    const auto v = schatten_membership(identity_family(), p, 8, identity_model());
    CHECK(v.verdict == Verdict::diverges);
    CHECK(v.series.mode_tail_note);
  }
}

TEST_CASE("schatten_membership: growth models") {
  const Instance inst = scaled_identity_family(4);
  SUBCASE("lambda_1 = n, scalar blocks of dimension 1") {
    const GrowthModel m{Sequence::linear(1.0, 0.0), Sequence::constant(1.0), std::nullopt, true};
    CHECK(schatten_membership(inst, 2.5, 8, m).verdict == Verdict::converges);
    CHECK(schatten_membership(inst, 4.0, 8, m).verdict == Verdict::converges);
    // p <= 1 on the k-series already diverges.
    CHECK(schatten_membership(inst, 1.0, 8, m).verdict == Verdict::diverges);
  }
  SUBCASE("p = 2 with lambda_1 = n is not certified") {
    const GrowthModel m{Sequence::linear(1.0, 0.0), Sequence::constant(1.0), std::nullopt, true};
    CHECK(schatten_membership(inst, 2.0, 8, m).verdict != Verdict::converges);
  }
  SUBCASE("dimensions growing like n^2 with lambda_1 = n diverge at p = 2.5") {
    const GrowthModel m{Sequence::linear(1.0, 0.0), Sequence::power(1.0, 2.0), std::nullopt, true};
    CHECK(schatten_membership(inst, 2.5, 8, m).verdict == Verdict::diverges);
  }
  SUBCASE("a model that disagrees with the instance is flagged") {
    const GrowthModel m{Sequence::constant(5.0), Sequence::constant(1.0), std::nullopt, true};
    const auto v = schatten_membership(inst, 2.5, 8, m);
    const bool flagged = std::any_of(v.evidence.begin(), v.evidence.end(),
                                     [](const EvidenceItem& e) { return e.kind == "model_mismatch"; });
    CHECK(flagged);
  }
}

TEST_CASE("discrete_spectrum_check") {
  SUBCASE("A_n = n I at probe 0") {
    const auto r = discrete_spectrum_check(scaled_identity_family(5), std::nullopt, 0.0);
    REQUIRE(r.resolvent_norms.size() == 5);
    for (int n = 1; n <= 5; ++n) CHECK(r.resolvent_norms[n - 1] == doctest::Approx(1.0 / n));
    CHECK(r.decreasing);
    CHECK(r.truncation_verdict == DiscreteVerdict::criterion_satisfied);
  }
  SUBCASE("identity family") {
    const auto r = discrete_spectrum_check(identity_family(), identity_model(), 0.0);
    for (double x : r.resolvent_norms) CHECK(x == doctest::Approx(1.0));
    CHECK(r.truncation_verdict == DiscreteVerdict::criterion_fails);
    REQUIRE(r.model_verdict.has_value());
    CHECK(*r.model_verdict == DiscreteVerdict::criterion_fails);
  }
  SUBCASE("single block") {
    const auto r = discrete_spectrum_check(Instance({trivial_block()}), std::nullopt, 0.0);
    CHECK(r.truncation_verdict == DiscreteVerdict::criterion_satisfied);
  }
  SUBCASE("extension target uses the closed-form spectrum") {
    // Nearest eigenvalue of the trivial block to 1 + pi i is 1 or 1 + 2 pi i.
    const double d = spectral_distance(trivial_block(), Complex(1.0, kPi), ResolventTarget::extension);
    CHECK(d == doctest::Approx(kPi));
    CHECK_THROWS_AS(spectral_distance(trivial_block(), Complex(1.0, 2 * kPi), ResolventTarget::extension), Error);
  }
  SUBCASE("probe in the spectrum") {
    try {
      (void)discrete_spectrum_check(scaled_identity_family(3), std::nullopt, 2.0);
      FAIL("expected ProbeInSpectrum");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ProbeInSpectrum);
    }
  }
}

TEST_CASE("resolvent norm of a Hermitian block is one over the distance") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    auto built = random_block({.dim = 4}, rng);
    const Complex probe(g(rng), g(rng));
    const double r = coefficient_resolvent_norm(built.block, probe);
    CHECK(r * spectral_distance(built.block, probe) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("truncation_error") {
  const Instance inst = scaled_identity_family(5);
  for (std::size_t m = 1; m < 5; ++m) {
    const auto t = truncation_error(inst, 0.0, m);
    CHECK(t.exact == doctest::Approx(1.0 / (m + 1)).epsilon(1e-14));
    CHECK(t.bound == doctest::Approx(1.0 / (m + 1)).epsilon(1e-14));
  }
  const auto id = truncation_error(identity_family(), 0.0, 1);
  CHECK(id.exact == doctest::Approx(1.0));
  CHECK_THROWS_AS(truncation_error(inst, 0.0, 0), Error);
  CHECK_THROWS_AS(truncation_error(inst, 0.0, 5), Error);
}
