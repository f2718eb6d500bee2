// Serial vs OpenMP enumeration kernels, with the naive reference for scale.
//   ./jsrlab_bench --benchmark_filter=Bracket

#include <benchmark/benchmark.h>

#include "jsrlab/jsr.hpp"
#include "jsrlab/prob.hpp"
#include "jsrlab/reference.hpp"
#include "oracles.hpp"

using namespace jsrlab;

namespace {

MatrixTuple random_tuple(std::size_t n, Eigen::Index d) {
  Rng rng(17);
  std::vector<Matrix> mats;
  for (std::size_t i = 0; i < n; ++i) mats.push_back(oracle::random_matrix(d, rng));
  return MatrixTuple(mats);
}

MarkovChain dense_chain(std::size_t n) {
  Rng rng(18);
  return oracle::chain_with_stationary(oracle::random_strongly_connected(static_cast<Eigen::Index>(n), 1.0, rng));
}

void BM_Bracket(benchmark::State& state, Exec exec) {
  const MatrixTuple t = random_tuple(3, 4);
  const auto horizon = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(jsr_bounds_bruteforce(t, horizon, NormKind::Two, exec));
}

void BM_BracketReference(benchmark::State& state) {
  const MatrixTuple t = random_tuple(3, 4);
  const auto horizon = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(reference::jsr_bounds(t, horizon));
}

void BM_Expectation(benchmark::State& state, Exec exec) {
  const MatrixTuple t = random_tuple(3, 4);
  const MarkovChain c = dense_chain(3);
  const auto horizon = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(expectation_curve(t, c, horizon, {.exec = exec}));
}

void BM_ExpectationReference(benchmark::State& state) {
  const MatrixTuple t = random_tuple(3, 4);
  const MarkovChain c = dense_chain(3);
  const auto horizon = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    for (std::size_t n = 1; n <= horizon; ++n) benchmark::DoNotOptimize(reference::expectation(t, c, n));
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_Bracket, serial, Exec::Serial)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Bracket, parallel, Exec::Parallel)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BracketReference)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Expectation, serial, Exec::Serial)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Expectation, parallel, Exec::Parallel)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ExpectationReference)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
