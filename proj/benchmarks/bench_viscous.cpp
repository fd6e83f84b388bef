#include <benchmark/benchmark.h>

#include <cmath>

#include "pwave/oracle.hpp"
#include "pwave/profile.hpp"

namespace {

// The argument is -log10(eps).
void BM_UViscous(benchmark::State& state) {
  const pwave::RiemannPerturbedIC ic(pwave::burgers_flux(), 1.0, -1.0, pwave::square_wave(0.3, 1.0));
  const double eps = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pwave::u_viscous(ic, 0.5, 1.0, eps));
}
BENCHMARK(BM_UViscous)->DenseRange(1, 3);

}  // namespace
