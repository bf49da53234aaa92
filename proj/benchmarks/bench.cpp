#include <benchmark/benchmark.h>

#include "imdyn/expansion.hpp"
#include "imdyn/map_gen.hpp"
#include "imdyn/measure.hpp"
#include "imdyn/orbit.hpp"

using namespace imdyn;

static void BM_MonotoneBranches(benchmark::State& state) {
  auto f = tent(Rational(2));
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto branches = monotone_branches(f, n);
    benchmark::DoNotOptimize(branches);
  }
}
BENCHMARK(BM_MonotoneBranches)->Arg(8)->Arg(10)->Arg(12);

static void BM_PeriodicOrbits(benchmark::State& state) {
  auto f = skew_tent(Rational(1) / 3);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto orbits = periodic_orbits(f, n);
    benchmark::DoNotOptimize(orbits);
  }
}
BENCHMARK(BM_PeriodicOrbits)->Arg(6)->Arg(8)->Arg(10);

static void BM_UlamDensity(benchmark::State& state) {
  auto f = skew_tent(Rational(1) / 3);
  ExpansionCertificate cert{1, Rational(3) / 2, {1}};
  const auto bins = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto d = ulam_acip(f, bins, cert);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_UlamDensity)->Arg(256)->Arg(1024);

static void BM_GammaRefinement(benchmark::State& state) {
  auto f = tent(Rational(2));
  IntervalSet U(Interval{Rational(2) / 5, Rational(3) / 5});
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto g = gamma_n(f, U, n);
    benchmark::DoNotOptimize(g);
  }
}
BENCHMARK(BM_GammaRefinement)->Arg(6)->Arg(10);

BENCHMARK_MAIN();
