#include <benchmark/benchmark.h>

#include <random>

#include "mrk/gram.hpp"
#include "mrk/imaging.hpp"
#include "mrk/multires.hpp"
#include "mrk/random_measures.hpp"

namespace {

using namespace mrk;

RandomMeasureOptions color_options() {
  RandomMeasureOptions o;
  o.spaceSize = kColorSpaceSize;
  o.maxSupport = 16;
  return o;
}

void BM_BaseKernel(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto x = random_submeasure(rng, kColorSpaceSize, static_cast<std::uint32_t>(state.range(0)), 1.0);
  const auto y = random_submeasure(rng, kColorSpaceSize, static_cast<std::uint32_t>(state.range(0)), 1.0);
  const auto spec = state.range(1) == 0 ? BaseKernelSpec::rbf(0.25, 1, 0.01) : BaseKernelSpec::jensen_divergence();
  for (auto _ : state) benchmark::DoNotOptimize(eval(spec, x, y));
}
BENCHMARK(BM_BaseKernel)->ArgsProduct({{8, 64, 512}, {0, 1}});

void BM_Factorized(benchmark::State& state) {
  const auto alpha = static_cast<std::uint32_t>(state.range(0));
  const auto depth = static_cast<std::uint32_t>(state.range(1));
  std::mt19937_64 rng(2);
  const MultiresSpec spec{build_uniform_tree(alpha, depth, 1.0 / alpha), BaseKernelSpec::rbf(0.25, 1, 0.01)};
  const auto mu = random_nested_measure(spec.tree, rng, color_options());
  const auto nu = random_nested_measure(spec.tree, rng, color_options());
  for (auto _ : state) benchmark::DoNotOptimize(k_multires_factorized(spec, mu, nu));
  state.counters["nodes"] = static_cast<double>(spec.tree.size());
}
BENCHMARK(BM_Factorized)->ArgsProduct({{2, 3}, {1, 2, 3}})->Args({4, 2})->Args({9, 2});

void BM_BruteForce(benchmark::State& state) {
  const auto alpha = static_cast<std::uint32_t>(state.range(0));
  const auto depth = static_cast<std::uint32_t>(state.range(1));
  std::mt19937_64 rng(2);
  const MultiresSpec spec{build_uniform_tree(alpha, depth, 1.0 / alpha), BaseKernelSpec::rbf(0.25, 1, 0.01)};
  const auto mu = random_nested_measure(spec.tree, rng, color_options());
  const auto nu = random_nested_measure(spec.tree, rng, color_options());
  for (auto _ : state) benchmark::DoNotOptimize(k_multires_bruteforce(spec, mu, nu));
  state.counters["partitions"] = count_partitions(spec.tree);
}
BENCHMARK(BM_BruteForce)->ArgsProduct({{2, 3}, {1, 2, 3}});

void BM_Gram(benchmark::State& state) {
  SynthOptions o;
  o.perClass = static_cast<std::uint32_t>(state.range(0));
  o.splitsPerLevel = 2;
  o.depth = 2;
  const auto records = synth_dataset(o);
  const MultiresSpec spec{build_uniform_tree(4, 2, 0.25), BaseKernelSpec::rbf(0.25, 1, 0.01)};
  for (auto _ : state) benchmark::DoNotOptimize(compute_gram(records, spec, static_cast<unsigned>(state.range(1))));
}
BENCHMARK(BM_Gram)->Args({30, 1})->Args({60, 1})->Args({60, 0})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
