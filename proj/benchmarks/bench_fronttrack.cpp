#include <benchmark/benchmark.h>

#include "pwave/fronttrack.hpp"
#include "pwave/profile.hpp"

namespace {

// Shock data on a window wide enough for t_end = 10; the argument is 1/delta.
void BM_EvolveShock(benchmark::State& state) {
  const pwave::RiemannPerturbedIC ic(pwave::burgers_flux(), 1.0, -1.0, pwave::square_wave(0.3, 1.0));
  const double delta = 1.0 / static_cast<double>(state.range(0));
  const pwave::FluxPolygon poly = pwave::polygon_for(ic, delta);
  const pwave::PiecewiseConstantState s0 = pwave::discretize(ic, poly, pwave::line_window(ic, poly, 10.0));
  std::size_t events = 0;
  for (auto _ : state) {
    pwave::FrontTracker tracker(s0, poly);
    tracker.advance(10.0);
    events = tracker.events_processed();
    benchmark::DoNotOptimize(tracker.front_count());
  }
  state.counters["events"] = static_cast<double>(events);
}
BENCHMARK(BM_EvolveShock)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_EvolvePeriodicExp(benchmark::State& state) {
  const pwave::PeriodicProfile w = pwave::TwoConstantProfile{}.profile();
  const double delta = 1.0 / static_cast<double>(state.range(0));
  const pwave::FluxPolygon poly = pwave::polygon_for(w, 0.0, pwave::exp_flux(), delta);
  const pwave::PiecewiseConstantState s0 = pwave::discretize_periodic(w, 0.0, poly);
  for (auto _ : state) {
    pwave::FrontTracker tracker(s0, poly);
    tracker.advance(80.0);
    benchmark::DoNotOptimize(tracker.front_count());
  }
}
BENCHMARK(BM_EvolvePeriodicExp)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
