// Serial reference vs OpenMP kernel, side by side.

#include <benchmark/benchmark.h>

#include "comgap/glauber_tfa.hpp"
#include "comgap/markov_core.hpp"
#include "comgap/sampling.hpp"

using namespace comgap;

namespace {

auto tfa_draw() {
  static const auto spec = glauber::default_tfa_spec();
  static const glauber::PathSampler sampler(spec);
  static const glauber::TfaObservable f(255, {8, 24});
  return [](Rng& rng) { return f(glauber::path_values(spec, sampler(255, rng))); };
}

void BM_DrawSamplesSerial(benchmark::State& state) {
  const auto draw = tfa_draw();
  for (auto _ : state) {
    benchmark::DoNotOptimize(draw_samples_serial(draw, static_cast<std::size_t>(state.range(0)), 1, "bench"));
  }
}

void BM_DrawSamplesOmp(benchmark::State& state) {
  const auto draw = tfa_draw();
  for (auto _ : state) {
    benchmark::DoNotOptimize(draw_samples(draw, static_cast<std::size_t>(state.range(0)), 1, "bench"));
  }
}

ReversibleChain bench_chain(std::size_t n) {
  Rng rng = rng_stream(3, "bench-chain", 0);
  return random_reversible_chain(n, rng);
}

std::vector<double> bench_observable(std::size_t n) {
  Rng rng = rng_stream(3, "bench-f", 0);
  std::vector<double> f(n);
  for (auto& v : f) v = uniform01(rng);
  return f;
}

void BM_LipSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto c = bench_chain(n);
  const auto f = bench_observable(n);
  for (auto _ : state) benchmark::DoNotOptimize(lip_constant_serial(c.kernel, f, true));
}

void BM_LipOmp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto c = bench_chain(n);
  const auto f = bench_observable(n);
  for (auto _ : state) benchmark::DoNotOptimize(lip_constant(c.kernel, f, true));
}

void BM_DenseGlauberSerial(benchmark::State& state) {
  const auto spec = glauber::default_tfa_spec();
  for (auto _ : state) {
    benchmark::DoNotOptimize(glauber::build_dense_glauber_serial(spec, static_cast<int>(state.range(0))));
  }
}

void BM_DenseGlauberOmp(benchmark::State& state) {
  const auto spec = glauber::default_tfa_spec();
  for (auto _ : state) {
    benchmark::DoNotOptimize(glauber::build_dense_glauber(spec, static_cast<int>(state.range(0))));
  }
}

}  // namespace

BENCHMARK(BM_DrawSamplesSerial)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DrawSamplesOmp)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LipSerial)->Arg(500)->Arg(2000);
BENCHMARK(BM_LipOmp)->Arg(500)->Arg(2000);
BENCHMARK(BM_DenseGlauberSerial)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DenseGlauberOmp)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
