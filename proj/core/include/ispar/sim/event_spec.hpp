#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ispar::sim {

enum class EventKind : std::uint8_t {
  Healthy = 0,
  InternalPhaseGround = 1,
  InternalTurnTurn = 2,
  InternalWindingWinding = 3,
  MagnetizingInrush = 4,
  SympatheticInrush = 5,
  Overexcitation = 6,
  ExternalFaultCtSat = 7,
};
inline constexpr int kEventKindCount = 8;

enum class Unit : std::uint8_t { None = 0, Series = 1, Exciting = 2 };
enum class Side : std::uint8_t { Primary = 0, Secondary = 1 };
enum class PhaseShift : std::uint8_t { Forward = 0, Backward = 1 };
enum class SwitchTarget : std::uint8_t { Load = 0, Capacitor = 1 };
enum class LineLocation : std::uint8_t { Line1 = 0, Line2 = 1 };

// The eleven shunt fault types.
enum class FaultType : std::uint8_t { AG, BG, CG, ABG, ACG, BCG, AB, AC, BC, ABC, ABCG };
inline constexpr int kFaultTypeCount = 11;

// Phases involved in a fault type as a bit mask (bit 0 = A) and whether the
// fault connects to ground.
unsigned faultPhases(FaultType t);
bool faultToGround(FaultType t);

bool isInternalFault(EventKind k);

// Disturbance class index used by the identification task, or nullopt for
// internal faults / healthy records:
// 0 magnetizing inrush, 1 sympathetic inrush, 2 overexcitation, 3 external fault.
std::optional<int> disturbanceClass(EventKind k);

struct EventSpec {
  EventKind kind = EventKind::Healthy;
  Unit unit = Unit::None;          // internal kinds only
  Side side = Side::Primary;
  FaultType faultType = FaultType::AG;
  int faultPhase = 0;              // turn-turn / winding-winding: 0 = A, 1 = B, 2 = C
  double faultResistance = 0.01;   // ohm
  double windingPercent = 20.0;    // percent of winding shorted
  double inceptionTime = 0.0;      // s from record start
  PhaseShift phaseShift = PhaseShift::Forward;
  double tapRatio = 1.0;           // (0, 1]
  SwitchTarget switchTarget = SwitchTarget::Load;
  int switchLevel = 0;             // overexcitation severity step 0..2
  LineLocation faultLocation = LineLocation::Line1;
  std::array<double, 3> residualFlux{};  // inrush kinds, fraction of peak flux

  // Throws InvalidInput when a field is out of its domain or the combination
  // of fields does not fit the kind. `span` is the simulated duration.
  void validate(double span) const;
};

std::string_view toString(EventKind k);
std::string_view toString(Unit u);
std::string_view toString(Side s);
std::string_view toString(PhaseShift p);
std::string_view toString(SwitchTarget s);
std::string_view toString(LineLocation l);
std::string_view toString(FaultType t);

EventKind parseEventKind(std::string_view s);
Unit parseUnit(std::string_view s);
Side parseSide(std::string_view s);
PhaseShift parsePhaseShift(std::string_view s);
SwitchTarget parseSwitchTarget(std::string_view s);
LineLocation parseLineLocation(std::string_view s);
FaultType parseFaultType(std::string_view s);

}  // namespace ispar::sim
