#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ispar/sim/event_spec.hpp"
#include "ispar/sim/network.hpp"

namespace ispar::sim {

struct WaveformRecord {
  std::array<std::vector<double>, 3> id;  // differential current per phase, A
  double sampleRate = 10000.0;
  EventKind label = EventKind::Healthy;
  Unit unitLabel = Unit::None;
  EventSpec spec;
  std::uint64_t seed = 0;

  std::size_t length() const { return id[0].size(); }
};

// Flux of a core energized at tPrime, t seconds after energization.
double inrushFlux(double t, double phiR, double phiM, double tPrime, double omega);

// Event instant for sweep position k: preCycles whole cycles plus k steps of
// 1.38 ms (a 30 degree shift at 60 Hz rounded as in the sweep tables).
double inceptionTimeFor(int k, const SimulationSetup& setup);

// Simulated duration of a record for `spec`.
double recordSpan(const EventSpec& spec, const SimulationSetup& setup);

// Integrates the network for `spec` and forms the three differential
// currents. The same (spec, setup, seed) always yields the same bits.
WaveformRecord simulateEvent(const EventSpec& spec, const SimulationSetup& setup,
                             std::uint64_t seed);

}  // namespace ispar::sim
