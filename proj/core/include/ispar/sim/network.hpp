#pragma once

#include <array>
#include <utility>
#include <vector>

#include "ispar/sim/circuit.hpp"
#include "ispar/sim/current_transformer.hpp"
#include "ispar/sim/event_spec.hpp"
#include "ispar/sim/rating.hpp"
#include "ispar/sim/saturation.hpp"

namespace ispar::sim {

// Series and exciting unit ratings of one ISPAR phase. The LTC tap scales
// winding 2 of the exciting unit.
struct IsparDesign {
  TransformerRating series;    // w1 = source half, w2 = load half, w3 = quadrature winding
  TransformerRating exciting;  // w1 = shunt primary, w2 = tapped secondary at full tap
  double windingResistance = 0.002;  // pu on each winding's own base

  static IsparDesign defaults();
  void validate() const;
};

// Two-source system around the ISPAR. Impedances are per unit on
// (baseMva, lineVoltage).
struct NetworkConstants {
  double frequency = 60.0;
  double lineVoltage = 230e3;  // V rms line to line
  double baseMva = 500.0;
  double sourceMagnitude = 1.0;  // pu EMF of both sources
  double source2Angle = 0.0;     // deg
  double source1R = 0.03, source1X = 0.15;  // source1R is the shared system resistance
  double source2R = 0.015, source2X = 0.15;
  double line1R = 0.01, line1X = 0.10;
  double line2R = 0.01, line2X = 0.10;
  double loadP = 0.3, loadPowerFactor = 0.95;  // at the remote bus
  double breakerResistance = 1e-3;             // ohm, closed contact
  double openResistance = 1e9;                 // ohm
  double strayConductance = 1e-9;              // S, every node to ground
  TransformerRating incoming;                  // transformer energized for sympathetic inrush
  std::array<double, 3> rejectionLevels{1.25, 1.325, 1.4};  // pu EMF after load rejection
  std::array<double, 3> capacitorLevels{2.0, 2.5, 3.0};     // pu susceptance switched in

  static NetworkConstants defaults();
  double baseImpedance() const;
  void validate() const;
};

struct SimulationOptions {
  double sampleRate = 10000.0;
  int preCycles = 2;
  int postCycles = 3;
  bool noise = true;
  double noiseSnrDb = 60.0;
  CtParams ctSource;  // series winding 1 terminal
  CtParams ctLoad;    // series winding 2 terminal

  static SimulationOptions defaults();
  void validate() const;
};

struct SimulationSetup {
  IsparDesign ispar = IsparDesign::defaults();
  SaturationCurve saturation = SaturationCurve::defaultCurve();
  NetworkConstants network = NetworkConstants::defaults();
  SimulationOptions options = SimulationOptions::defaults();

  void validate() const;
  double ratedCurrent() const { return ispar.series.current[0]; }
};

// Current entering one winding at its dotted terminal, expressed as a signed
// sum of branch currents, with the winding's turns relative to its core's
// reference winding.
struct TerminalProbe {
  std::vector<std::pair<BranchId, double>> parts;
  double turns = 1.0;

  double read(const Circuit& c) const;
};

// Circuit for one event plus the probes whose ampere-turn sum forms each
// phase's differential current.
struct BuiltNetwork {
  Circuit circuit;
  std::array<std::vector<TerminalProbe>, 3> idealTerms;  // measured by ideal CTs
  std::array<TerminalProbe, 3> sourceSide;               // series winding 1
  std::array<TerminalProbe, 3> loadSide;                 // series winding 2
  std::array<BranchId, 3> incomingBreaker{-1, -1, -1};
  std::array<BranchId, 3> sourceBreaker{-1, -1, -1};
};

BuiltNetwork buildNetwork(const EventSpec& spec, const SimulationSetup& setup);

}  // namespace ispar::sim
