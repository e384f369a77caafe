#include <benchmark/benchmark.h>

#include "ispar/sim/network.hpp"
#include "ispar/sim/simulator.hpp"

using namespace ispar;

namespace {

void BM_SimulateEvent(benchmark::State& state) {
  sim::SimulationSetup setup;
  sim::EventSpec spec;
  spec.kind = static_cast<sim::EventKind>(state.range(0));
  if (spec.kind == sim::EventKind::InternalPhaseGround) spec.unit = sim::Unit::Series;
  if (spec.kind != sim::EventKind::Healthy) spec.inceptionTime = sim::inceptionTimeFor(3, setup);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sim::simulateEvent(spec, setup, ++seed));
  state.SetLabel(std::string(sim::toString(spec.kind)));
}
BENCHMARK(BM_SimulateEvent)->Arg(0)->Arg(1)->Arg(4)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

}  // namespace
