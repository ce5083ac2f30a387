#include <numbers>
#include <random>

#include <benchmark/benchmark.h>

#include "mpnormal/mpnormal.hpp"

using namespace mpnormal;

namespace {

Block commuting_block(Eigen::Index dim, double a, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix z(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) z(i, j) = Complex(g(rng), g(rng));
  const Matrix q = Eigen::HouseholderQR<Matrix>(z).householderQ();
  Vector da(dim), dw(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    da(i) = 1.0 + 2.0 * u(rng);
    dw(i) = std::polar(1.0, 2.0 * std::numbers::pi * u(rng));
  }
  Matrix A = q * da.asDiagonal() * q.adjoint();
  A = 0.5 * (A + A.adjoint());
  return Block(Interval(a, a + 1.0), A, q * dw.asDiagonal() * q.adjoint());
}

Instance random_instance(int blocks, Eigen::Index dim) {
  std::mt19937_64 rng(1);
  std::vector<Block> out;
  for (int n = 0; n < blocks; ++n) out.push_back(commuting_block(dim, 2.0 * n, rng));
  return Instance(out);
}

void BM_OperatorSpectrum(benchmark::State& state) {
  const Instance inst = random_instance(static_cast<int>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(operator_spectrum(inst, state.range(1)));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 4 * (2 * state.range(1) + 1));
}
BENCHMARK(BM_OperatorSpectrum)->Args({4, 16})->Args({16, 16})->Args({16, 128});

void BM_CharacteristicEigenvalues(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const Block b = commuting_block(state.range(0), 0.0, rng);
  for (auto _ : state) benchmark::DoNotOptimize(characteristic_eigenvalues(b, 16));
}
BENCHMARK(BM_CharacteristicEigenvalues)->Arg(2)->Arg(6)->Arg(16);

void BM_FdEigenvalues(benchmark::State& state) {
  const Block b(Interval(0.0, 1.0), Matrix::Identity(1, 1), Matrix::Identity(1, 1));
  for (auto _ : state) benchmark::DoNotOptimize(fd_eigenvalues(b, static_cast<std::size_t>(state.range(0)), 3));
}
BENCHMARK(BM_FdEigenvalues)->Arg(1000)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);

void BM_SchattenMembership(benchmark::State& state) {
  const Instance inst = random_instance(8, 3);
  for (auto _ : state) benchmark::DoNotOptimize(schatten_membership(inst, 2.0, state.range(0)));
}
BENCHMARK(BM_SchattenMembership)->Arg(64)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
