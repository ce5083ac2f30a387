#include <map>

#include "doctest.h"
#include "test_support.hpp"

using namespace mpnormal;
using namespace mpnormal::testing;

namespace {

constexpr double kPi = std::numbers::pi;

bool contains(const std::vector<Complex>& set, Complex z, double tol) {
  return std::any_of(set.begin(), set.end(), [&](Complex w) { return std::abs(w - z) <= tol; });
}

std::vector<EigenvalueRecord> eigenvalues_of(const Block& b, long k_max) {
  return block_eigenvalues(b, simultaneous_eigenbasis(b), k_max);
}

}  // namespace

TEST_CASE("block_eigenvalues: periodic scalar block") {
  const auto recs = eigenvalues_of(trivial_block(), 1);
  REQUIRE(recs.size() == 3);
  const auto set = lambdas(recs);
  // e^{(lambda - 1) * 1} = 1 means lambda - 1 in 2 pi i Z.
  for (Complex z : set) CHECK(std::abs(std::exp(z - 1.0) - 1.0) < 1e-14);
  CHECK(contains(set, {1.0, 0.0}, 1e-15));
  CHECK(contains(set, {1.0, 2 * kPi}, 1e-14));
  CHECK(contains(set, {1.0, -2 * kPi}, 1e-14));
  // Sign convention: k = 1 gives 1 - 2 pi i.
  CHECK(recs[2].k == 1);
  CHECK(recs[2].lambda.imag() == doctest::Approx(-2 * kPi));
}

TEST_CASE("block_eigenvalues: antiperiodic scalar block") {
  const auto recs = eigenvalues_of(antiperiodic_block(), 0);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].delta == doctest::Approx(kPi));
  CHECK(recs[0].lambda.real() == doctest::Approx(1.0));
  CHECK(recs[0].lambda.imag() == doctest::Approx(-kPi));

  // e^{lambda - 1} = -1, i.e. lambda = 1 + i pi (2j + 1); the interior of the
  // enumeration covers the same odd multiples.
  const auto wide = lambdas(eigenvalues_of(antiperiodic_block(), 4));
  for (Complex z : wide) CHECK(std::abs(std::exp(z - 1.0) + 1.0) < 1e-13);
  for (int j = -3; j <= 3; ++j) CHECK(contains(wide, {1.0, kPi * (2 * j + 1)}, 1e-12));
}

TEST_CASE("block_eigenvalues: spacing scales with 1/(b - a)") {
  const Block b(Interval(0.0, 2.0), scalar(1.0), scalar(1.0));
  const auto recs = eigenvalues_of(b, 3);
  for (std::size_t i = 1; i < recs.size(); ++i) {
    CHECK(std::abs(recs[i].lambda.imag() - recs[i - 1].lambda.imag()) == doctest::Approx(kPi));
  }
}

TEST_CASE("operator_spectrum: unions, tags and ordering") {
  SUBCASE("singleton") {
    const auto slice = operator_spectrum(Instance({trivial_block()}), 0);
    REQUIRE(slice.records.size() == 1);
    CHECK(slice.records[0].lambda == Complex(1.0, 0.0));
    CHECK(slice.complete_modes);
  }
  SUBCASE("two identical blocks keep both copies") {
    const Block b1(Interval(0.0, 1.0), scalar(1.0), scalar(1.0));
    const Block b2(Interval(2.0, 3.0), scalar(1.0), scalar(1.0));
    const auto slice = operator_spectrum(Instance({b1, b2}), 2);
    REQUIRE(slice.records.size() == 10);
    std::map<long, int> per_k_block1, per_k_block2;
    for (const auto& r : slice.records) (r.block_index == 1 ? per_k_block1 : per_k_block2)[r.k]++;
    CHECK(per_k_block1.size() == 5);
    CHECK(per_k_block2.size() == 5);
    std::vector<Complex> first, second;
    for (const auto& r : slice.records) (r.block_index == 1 ? first : second).push_back(r.lambda);
    CHECK(hausdorff_distance(first, second) == 0.0);
    // Equal moduli are ordered by block first.
    CHECK(slice.records[0].block_index == 1);
    CHECK(slice.records[1].block_index == 2);
  }
  SUBCASE("two blocks with different A") {
    const Block b1(Interval(0.0, 1.0), scalar(1.0), scalar(1.0));
    const Block b2(Interval(1.5, 2.5), scalar(2.0), scalar(1.0));
    const auto slice = operator_spectrum(Instance({b1, b2}), 1);
    REQUIRE(slice.records.size() == 6);
    // Per-block characteristic equation e^{(lambda - alpha)} = 1.
    for (const auto& r : slice.records) {
      const double alpha = r.block_index == 1 ? 1.0 : 2.0;
      CHECK(r.lambda.real() == doctest::Approx(alpha));
      CHECK(std::abs(std::exp(r.lambda - alpha) - 1.0) < 1e-13);
    }
    CHECK(slice.records[0].lambda == Complex(1.0, 0.0));
    CHECK(slice.records[1].lambda == Complex(2.0, 0.0));
    for (std::size_t i = 1; i < slice.records.size(); ++i) {
      CHECK(std::abs(slice.records[i - 1].lambda) <= std::abs(slice.records[i].lambda));
    }
  }
  SUBCASE("invalid block is rejected") {
    const Block bad(Interval(0.0, 1.0), diag({1.0, 2.0}), rotation(kPi / 4));
    try {
      (void)operator_spectrum(Instance({bad}), 1);
      FAIL("expected InvalidBlock");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidBlock);
    }
  }
  SUBCASE("mode truncation") {
    const Block b(Interval(0.0, 1.0), diag({1.0, 2.0, 3.0}), Matrix::Identity(3, 3));
    const auto slice = operator_spectrum(Instance({b}), 2, {}, 2);
    CHECK(slice.records.size() == 10);
    CHECK_FALSE(slice.complete_modes);
  }
}

TEST_CASE("operator_spectrum: record count and real parts on random instances") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Block> blocks;
    std::vector<std::vector<double>> alphas;
    std::size_t total = 0;
    double a = 0.0;
    for (int n = 0; n < 3; ++n) {
      auto built = random_block({.dim = 1 + (trial + n) % 4, .a = a, .length = 0.5 + n}, rng);
      a += 0.5 + n + 0.25;
      total += built.block.dim();
      alphas.push_back(built.alphas);
      blocks.push_back(built.block);
    }
    const long k_max = 3;
    const auto slice = operator_spectrum(Instance(blocks), k_max);
    CHECK(slice.records.size() == total * (2 * k_max + 1));
    for (const auto& r : slice.records) {
      const auto& al = alphas[r.block_index - 1];
      const bool match = std::any_of(al.begin(), al.end(), [&](double x) { return std::abs(x - r.lambda.real()) < 1e-10; });
      CHECK(match);
    }
  }
}

TEST_CASE("verify_normal_spectrum_structure") {
  SUBCASE("trivial block passes") {
    const auto slice = operator_spectrum(Instance({trivial_block()}), 4);
    CHECK(verify_normal_spectrum_structure(slice).pass);
  }
  SUBCASE("corrupted imaginary part fails and names the record") {
    auto slice = operator_spectrum(Instance({trivial_block()}), 4);
    auto it = std::find_if(slice.records.begin(), slice.records.end(), [](auto& r) { return r.k == 2; });
    it->lambda += Complex(0.0, 0.01);
    const auto report = verify_normal_spectrum_structure(slice);
    CHECK_FALSE(report.pass);
    REQUIRE_FALSE(report.failures.empty());
    CHECK(report.failures.front().find("block 1 mode 1") != std::string::npos);
  }
  SUBCASE("real part below 1 fails") {
    auto slice = operator_spectrum(Instance({trivial_block()}), 1);
    for (auto& r : slice.records) r.lambda -= 0.5;
    CHECK_FALSE(verify_normal_spectrum_structure(slice).pass);
  }
  SUBCASE("random 3-block instance passes; Im against k regresses to slope -2pi/l") {
    std::mt19937_64 rng(77);
    std::vector<Block> blocks;
    double a = 0.0;
    for (int n = 0; n < 3; ++n) {
      blocks.push_back(random_block({.dim = 2 + n, .a = a, .length = 0.3 + 1.1 * n}, rng).block);
      a += 0.3 + 1.1 * n + 0.1;
    }
    const auto slice = operator_spectrum(Instance(blocks), 5);
    CHECK(verify_normal_spectrum_structure(slice).pass);

    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<double, double>>> groups;
    for (const auto& r : slice.records) groups[{r.block_index, r.mode_index}].push_back({double(r.k), r.lambda.imag()});
    for (const auto& [key, pts] : groups) {
      double mk = 0, mi = 0;
      for (auto [k, im] : pts) mk += k, mi += im;
      mk /= pts.size();
      mi /= pts.size();
      double sxy = 0, sxx = 0;
      for (auto [k, im] : pts) sxy += (k - mk) * (im - mi), sxx += (k - mk) * (k - mk);
      const double slope = sxy / sxx;
      CHECK(slope == doctest::Approx(-2 * kPi / blocks[key.first - 1].length()).epsilon(1e-12));
      for (auto [k, im] : pts) CHECK(std::abs(im - (mi + slope * (k - mk))) < 1e-9);
    }
  }
}

TEST_CASE("spectrum: gauge invariance under W -> e^{i theta} W") {
  std::mt19937_64 rng(5);
  const long k_max = 6;
  for (double theta : {0.3, -1.2, 2.9}) {
    auto built = random_block({.dim = 3, .length = 1.7}, rng);
    const Block& b = built.block;
    const Block g(b.interval(), b.A(), std::polar(1.0, theta) * b.W());
    const auto base = eigenvalues_of(b, k_max);
    const auto gauged = lambdas(eigenvalues_of(g, k_max));
    const auto moved = [&] {
      std::vector<Complex> out;
      for (const auto& r : base) out.push_back(r.lambda + Complex(0.0, theta / b.length()));
      return out;
    }();
    for (std::size_t i = 0; i < base.size(); ++i) {
      if (std::abs(base[i].k) <= k_max - 1) CHECK(contains(gauged, moved[i], 1e-10));
    }
    const auto grecs = eigenvalues_of(g, k_max);
    for (const auto& r : grecs) {
      if (std::abs(r.k) <= k_max - 1) CHECK(contains(moved, r.lambda, 1e-10));
    }
  }
}

TEST_CASE("spectrum: conjugation invariance") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    auto built = random_block({.dim = 4, .length = 0.9}, rng);
    const Block& b = built.block;
    const Matrix q = random_unitary(4, rng);
    const Block c(b.interval(), q.adjoint() * b.A() * q, q.adjoint() * b.W() * q);
    const auto x = lambdas(eigenvalues_of(b, 4));
    const auto y = lambdas(eigenvalues_of(c, 4));
    CHECK(hausdorff_distance(x, y) < 1e-9);
  }
}

TEST_CASE("spectrum: per-mode phases agree with the eigenvalues of W* e^{-A l}") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    auto built = random_block({.dim = 1 + trial % 5, .length = 0.2 + 0.2 * trial}, rng);
    const Block& b = built.block;
    const Matrix product = b.W().adjoint() * matrix_exponential(b.A(), -b.length());
    Eigen::ComplexEigenSolver<Matrix> es(product, false);
    std::vector<Complex> eig(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    const auto modes = simultaneous_eigenbasis(b);
    std::vector<Complex> per_mode;
    for (const auto& m : modes) per_mode.push_back(std::conj(m.omega) * std::exp(-m.alpha * b.length()));
    CHECK(hausdorff_distance(eig, per_mode) < 1e-10);
    // The phase of each eigenvalue of the product is the delta of some record.
    const auto recs = block_eigenvalues(b, modes, 0);
    for (Complex z : eig) {
      const bool found = std::any_of(recs.begin(), recs.end(), [&](const EigenvalueRecord& r) {
        return std::abs(std::polar(1.0, r.delta) - std::polar(1.0, std::arg(z))) < 1e-9;
      });
      CHECK(found);
    }
  }
}
