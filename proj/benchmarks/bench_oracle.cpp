#include <benchmark/benchmark.h>

#include "pwave/oracle.hpp"
#include "pwave/profile.hpp"

namespace {

pwave::RiemannPerturbedIC square_shock() {
  return {pwave::burgers_flux(), 1.0, -1.0, pwave::square_wave(0.3, 1.0)};
}

void BM_UExact(benchmark::State& state) {
  const auto ic = square_shock();
  const double t = static_cast<double>(state.range(0));
  double x = -0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pwave::u_exact(ic, x, t, pwave::Limit::left));
    x = x > 0.5 ? -0.5 : x + 1e-3;
  }
}
BENCHMARK(BM_UExact)->Arg(1)->Arg(16)->Arg(256);

void BM_ShockInterval(benchmark::State& state) {
  const auto ic = square_shock();
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pwave::shock_interval(ic, t));
}
BENCHMARK(BM_ShockInterval)->Arg(1)->Arg(16)->Arg(256);

void BM_PeriodicSolution(benchmark::State& state) {
  const pwave::PeriodicProfile w = pwave::TwoConstantProfile{}.profile();
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pwave::periodic_solution(w, 0.0, x, 8.0, pwave::Limit::left));
    x = x > 1.0 ? 0.0 : x + 1e-3;
  }
}
BENCHMARK(BM_PeriodicSolution);

}  // namespace
