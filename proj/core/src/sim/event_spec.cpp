#include "ispar/sim/event_spec.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ispar/common/error.hpp"

namespace ispar::sim {

namespace {

constexpr std::array<std::string_view, kEventKindCount> kKindNames = {
    "healthy",           "internal-phase-ground", "internal-turn-turn",
    "internal-winding-winding", "magnetizing-inrush", "sympathetic-inrush",
    "overexcitation",    "external-fault-ct-sat"};
constexpr std::array<std::string_view, 3> kUnitNames = {"none", "series", "exciting"};
constexpr std::array<std::string_view, 2> kSideNames = {"primary", "secondary"};
constexpr std::array<std::string_view, 2> kShiftNames = {"forward", "backward"};
constexpr std::array<std::string_view, 2> kSwitchNames = {"load", "capacitor"};
constexpr std::array<std::string_view, 2> kLineNames = {"line1", "line2"};
constexpr std::array<std::string_view, kFaultTypeCount> kFaultNames = {
    "ag", "bg", "cg", "abg", "acg", "bcg", "ab", "ac", "bc", "abc", "abcg"};

template <typename E, std::size_t N>
E parseName(const std::array<std::string_view, N>& names, std::string_view s, const char* what) {
  const auto it = std::find(names.begin(), names.end(), s);
  if (it == names.end()) {
    throw InvalidInput(std::string("unknown ") + what + " '" + std::string(s) + "'");
  }
  return static_cast<E>(it - names.begin());
}

}  // namespace

unsigned faultPhases(FaultType t) {
  switch (t) {
    case FaultType::AG: return 0b001;
    case FaultType::BG: return 0b010;
    case FaultType::CG: return 0b100;
    case FaultType::ABG:
    case FaultType::AB: return 0b011;
    case FaultType::ACG:
    case FaultType::AC: return 0b101;
    case FaultType::BCG:
    case FaultType::BC: return 0b110;
    case FaultType::ABC:
    case FaultType::ABCG: return 0b111;
  }
  return 0;
}

bool faultToGround(FaultType t) {
  switch (t) {
    case FaultType::AB:
    case FaultType::AC:
    case FaultType::BC:
    case FaultType::ABC: return false;
    default: return true;
  }
}

bool isInternalFault(EventKind k) {
  return k == EventKind::InternalPhaseGround || k == EventKind::InternalTurnTurn ||
         k == EventKind::InternalWindingWinding;
}

std::optional<int> disturbanceClass(EventKind k) {
  switch (k) {
    case EventKind::MagnetizingInrush: return 0;
    case EventKind::SympatheticInrush: return 1;
    case EventKind::Overexcitation: return 2;
    case EventKind::ExternalFaultCtSat: return 3;
    default: return std::nullopt;
  }
}

void EventSpec::validate(double span) const {
  if (!(span > 0.0)) throw InvalidInput("event: simulated span must be positive");
  if (kind != EventKind::Healthy && !(inceptionTime > 0.0 && inceptionTime < span)) {
    throw InvalidInput("event: inception time lies outside the simulated span");
  }
  if (!(tapRatio > 0.0 && tapRatio <= 1.0)) throw InvalidInput("event: tap ratio must lie in (0, 1]");
  const bool internal = isInternalFault(kind);
  if (internal && unit == Unit::None) throw InvalidInput("event: internal fault needs a unit");
  if (!internal && unit != Unit::None) {
    throw InvalidInput("event: only internal faults carry a faulty unit");
  }
  if (internal || kind == EventKind::ExternalFaultCtSat) {
    if (!(faultResistance > 0.0) || !std::isfinite(faultResistance)) {
      throw InvalidInput("event: fault resistance must be positive");
    }
  }
  if (internal && !(windingPercent > 0.0 && windingPercent < 100.0)) {
    throw InvalidInput("event: winding percent must lie in (0, 100)");
  }
  if ((kind == EventKind::InternalTurnTurn || kind == EventKind::InternalWindingWinding) &&
      (faultPhase < 0 || faultPhase > 2)) {
    throw InvalidInput("event: fault phase must be 0, 1 or 2");
  }
  if (kind == EventKind::Overexcitation && (switchLevel < 0 || switchLevel > 2)) {
    throw InvalidInput("event: overexcitation switch level must be 0, 1 or 2");
  }
  if (kind == EventKind::MagnetizingInrush || kind == EventKind::SympatheticInrush) {
    for (double r : residualFlux) {
      if (!(r >= -0.8 && r <= 0.8)) throw InvalidInput("event: residual flux must lie in [-0.8, 0.8]");
    }
  }
}

std::string_view toString(EventKind k) { return kKindNames.at(static_cast<std::size_t>(k)); }
std::string_view toString(Unit u) { return kUnitNames.at(static_cast<std::size_t>(u)); }
std::string_view toString(Side s) { return kSideNames.at(static_cast<std::size_t>(s)); }
std::string_view toString(PhaseShift p) { return kShiftNames.at(static_cast<std::size_t>(p)); }
std::string_view toString(SwitchTarget s) { return kSwitchNames.at(static_cast<std::size_t>(s)); }
std::string_view toString(LineLocation l) { return kLineNames.at(static_cast<std::size_t>(l)); }
std::string_view toString(FaultType t) { return kFaultNames.at(static_cast<std::size_t>(t)); }

EventKind parseEventKind(std::string_view s) { return parseName<EventKind>(kKindNames, s, "event kind"); }
Unit parseUnit(std::string_view s) { return parseName<Unit>(kUnitNames, s, "unit"); }
Side parseSide(std::string_view s) { return parseName<Side>(kSideNames, s, "side"); }
PhaseShift parsePhaseShift(std::string_view s) { return parseName<PhaseShift>(kShiftNames, s, "phase shift"); }
SwitchTarget parseSwitchTarget(std::string_view s) {
  return parseName<SwitchTarget>(kSwitchNames, s, "switch target");
}
LineLocation parseLineLocation(std::string_view s) {
  return parseName<LineLocation>(kLineNames, s, "fault location");
}
FaultType parseFaultType(std::string_view s) { return parseName<FaultType>(kFaultNames, s, "fault type"); }

}  // namespace ispar::sim
