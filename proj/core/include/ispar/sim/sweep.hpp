#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ispar/sim/event_spec.hpp"
#include "ispar/sim/network.hpp"

namespace ispar::sim {

// Value lists for every swept EventSpec field. Defaults are the published
// parameter tables.
struct SweepDomains {
  std::vector<double> phaseFaultResistances{0.01, 0.1, 1.0};
  std::vector<double> windingFaultResistances{0.01, 0.5, 1.0};  // turn-turn, winding-winding
  std::vector<double> windingPercents{20.0, 50.0, 70.0};
  std::vector<int> timeSteps{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  std::vector<double> seriesTaps{0.2, 0.4, 0.6, 0.8, 1.0};  // every kind except exciting faults
  std::vector<double> excitingTaps{1.0, 0.5};
  std::vector<FaultType> faultTypes;       // all 11 when empty
  std::vector<PhaseShift> shifts{PhaseShift::Forward, PhaseShift::Backward};
  std::vector<int> switchLevels{0, 1, 2};
  std::vector<SwitchTarget> switchTargets{SwitchTarget::Load, SwitchTarget::Capacitor};
  std::vector<LineLocation> locations{LineLocation::Line1, LineLocation::Line2};
  std::vector<double> residualLevels{0.8, -0.8, 0.6, -0.6, 0.4, -0.4, 0.0};

  // 7 levels x 3 phases: the named phase holds r, the others -r/2.
  std::vector<std::array<double, 3>> residualCombos() const;
  std::vector<FaultType> effectiveFaultTypes() const;
};

struct KindSampling {
  EventKind kind = EventKind::InternalPhaseGround;
  double fraction = 1.0;               // used when count is unset
  std::optional<std::size_t> count;    // exact number drawn from the grid
};

struct SweepConfig {
  SweepDomains domains;
  std::vector<KindSampling> kinds;
  std::uint64_t seed = 0;
};

// Full cartesian grid for one kind in a fixed nested order.
std::vector<EventSpec> enumerateGrid(EventKind kind, const SweepDomains& d,
                                     const SimulationSetup& setup);

struct ManifestEntry {
  std::size_t id = 0;
  std::string file;  // relative to the store directory
  EventSpec spec;
  std::uint64_t seed = 0;
};

// Subsampled plan with per-record seeds; no simulation.
std::vector<ManifestEntry> planSweep(const SweepConfig& cfg, const SimulationSetup& setup);

struct SweepSummary {
  std::vector<ManifestEntry> entries;
  std::map<std::string, std::size_t> classCounts;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

// Simulates every planned record into `storeDir` and writes
// `storeDir/manifest.jsonl`. On failure every file written so far is removed
// before the error propagates.
SweepSummary runSweep(const SweepConfig& cfg, const SimulationSetup& setup,
                      const std::string& storeDir, int jobs, const ProgressFn& progress = {});

inline constexpr std::string_view kManifestName = "manifest.jsonl";

std::string manifestHeaderLine(const std::map<std::string, std::size_t>& counts,
                               std::uint64_t seed);
std::string manifestLine(const ManifestEntry& e);
// Reads the record lines of a manifest; the header line is skipped.
std::vector<ManifestEntry> readManifest(const std::string& path);

}  // namespace ispar::sim
