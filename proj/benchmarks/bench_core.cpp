#include <benchmark/benchmark.h>

#include "reslab/arith.hpp"
#include "reslab/characters.hpp"
#include "reslab/dft.hpp"
#include "reslab/resonator.hpp"
#include "reslab/smooth.hpp"

namespace {

void BM_FactorTable(benchmark::State& state) {
  const auto limit = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    reslab::FactorTable t(limit);
    benchmark::DoNotOptimize(t.spf(limit));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FactorTable)->Arg(1 << 20)->Arg(1 << 24)->Unit(benchmark::kMillisecond);

void BM_DftPlan(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const reslab::DftPlan plan(n, +1);
  std::vector<reslab::cplx> data(n, reslab::cplx(1.0, 0.5));
  for (auto _ : state) {
    plan.execute(data);
    benchmark::DoNotOptimize(data.data());
  }
}
// 99990 = 2 * 3^2 * 5 * 11 * 101 needs the chirp-z path for 101.
BENCHMARK(BM_DftPlan)->Arg(4096)->Arg(99990)->Arg(1 << 17)->Unit(benchmark::kMicrosecond);

void BM_AllCharSums(benchmark::State& state) {
  const auto q = static_cast<std::uint64_t>(state.range(0));
  const reslab::CharacterGroup g(q);
  for (auto _ : state) benchmark::DoNotOptimize(reslab::all_char_sums(g, q / 3, 1));
}
BENCHMARK(BM_AllCharSums)->Arg(7919)->Arg(99991)->Arg(1'000'003)->Unit(benchmark::kMillisecond);

void BM_Psi(benchmark::State& state) {
  const auto x = static_cast<std::uint64_t>(state.range(0));
  const auto y = static_cast<std::uint64_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(reslab::psi(x, y));
}
BENCHMARK(BM_Psi)->Args({1'000'000, 100})->Args({1'000'000'000, 1000})->Unit(benchmark::kMicrosecond);

void BM_S1S2(benchmark::State& state) {
  const auto q = static_cast<std::uint64_t>(state.range(0));
  const reslab::CharacterGroup g(q);
  const auto cfg = reslab::config_at_level(q, 1000, 20.0, 0.1);
  const auto profile = reslab::all_char_sums(g, 1000, 1);
  for (auto _ : state) benchmark::DoNotOptimize(reslab::s1_s2(g, cfg, profile, 1));
}
BENCHMARK(BM_S1S2)->Arg(99991)->Arg(1'000'003)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
