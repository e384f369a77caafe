#include "ispar/sim/network.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ispar/common/error.hpp"
#include "ispar/sim/inductance.hpp"

namespace ispar::sim {

IsparDesign IsparDesign::defaults() {
  IsparDesign d;
  d.series.voltage = {28.75e3, 28.75e3, 50.0e3};
  d.series.current = {1255.0, 1255.0, 721.6};  // equal VA per winding
  d.exciting.voltage = {132.8e3, 28.87e3, 0.0};
  d.exciting.current = {543.0, 2500.0, 0.0};
  return d;
}

void IsparDesign::validate() const {
  series.validate(3);
  exciting.validate(2);
  if (!(windingResistance >= 0.0)) throw InvalidInput("ispar: winding resistance must be >= 0");
  if (series.frequency != exciting.frequency) {
    throw InvalidInput("ispar: series and exciting units must share one frequency");
  }
}

NetworkConstants NetworkConstants::defaults() {
  NetworkConstants n;
  n.incoming.voltage = {132.8e3, 7.97e3, 0.0};
  n.incoming.current = {543.0, 9050.0, 0.0};
  return n;
}

double NetworkConstants::baseImpedance() const { return lineVoltage * lineVoltage / (baseMva * 1e6); }

void NetworkConstants::validate() const {
  if (!(frequency > 0.0) || !(lineVoltage > 0.0) || !(baseMva > 0.0)) {
    throw InvalidInput("network: frequency, voltage and base must be positive");
  }
  if (!(sourceMagnitude >= 0.0)) throw InvalidInput("network: source magnitude must be >= 0");
  for (double x : {source1R, source1X, source2R, source2X, line1R, line1X, line2R, line2X}) {
    if (!(x >= 0.0)) throw InvalidInput("network: impedances must be non-negative");
  }
  if (source1R + source1X <= 0.0 || source2R + source2X <= 0.0 || line1R + line1X <= 0.0 ||
      line2R + line2X <= 0.0) {
    throw InvalidInput("network: every series impedance must be non-zero");
  }
  if (!(loadP >= 0.0) || !(loadPowerFactor > 0.0 && loadPowerFactor <= 1.0)) {
    throw InvalidInput("network: load must have P >= 0 and power factor in (0, 1]");
  }
  if (!(breakerResistance > 0.0) || !(openResistance > breakerResistance) ||
      !(strayConductance >= 0.0)) {
    throw InvalidInput("network: switch resistances out of range");
  }
  incoming.validate(2);
  for (double v : rejectionLevels) {
    if (!(v > 0.0)) throw InvalidInput("network: rejection levels must be positive");
  }
  for (double b : capacitorLevels) {
    if (!(b > 0.0)) throw InvalidInput("network: capacitor levels must be positive");
  }
}

SimulationOptions SimulationOptions::defaults() {
  SimulationOptions o;
  o.ctSource.kneeFactor = 20.0;
  o.ctSource.ratioError = 0.003;
  o.ctLoad.kneeFactor = 12.0;
  o.ctLoad.ratioError = 0.006;
  return o;
}

void SimulationOptions::validate() const {
  if (!(sampleRate > 0.0)) throw InvalidInput("simulation: sample rate must be positive");
  if (preCycles < 2 || postCycles < 3) {
    throw InvalidInput("simulation: need at least 2 cycles before and 3 after the event");
  }
  if (noise && !std::isfinite(noiseSnrDb)) throw InvalidInput("simulation: noise SNR must be finite");
  ctSource.validate();
  ctLoad.validate();
}

void SimulationSetup::validate() const {
  ispar.validate();
  saturation.validate();
  network.validate();
  options.validate();
  if (ispar.series.frequency != network.frequency) {
    throw InvalidInput("simulation: ISPAR and network frequencies differ");
  }
}

double TerminalProbe::read(const Circuit& c) const {
  double s = 0.0;
  for (const auto& [b, w] : parts) s += w * c.current(b);
  return s;
}

namespace {

struct Winding {
  NodeId from = kGround;
  NodeId to = kGround;
  NodeId junction = kGround;  // split point when the winding is divided
  BranchId firstCoil = -1;
  double turns = 1.0;
};

struct UnitBuild {
  std::vector<Winding> windings;
};

// Adds one single-phase unit. Winding w occupies coils 2w and 2w+1 of the
// model; a winding with both sub-coils present gets a junction node.
UnitBuild addUnit(Circuit& c, const InductanceModel& model, const TransformerRating& rating,
                  const SaturationCurve& curve, double residual, double rpu,
                  const std::vector<std::pair<NodeId, NodeId>>& terminals) {
  const double w = rating.omega();
  const double l1 = rating.voltage[0] / (w * rating.magnetizingCurrent * rating.current[0]);
  const double ratedFlux = std::sqrt(2.0) * rating.voltage[0] / w;
  const CoreCharacteristic core(curve, l1, ratedFlux);

  UnitBuild out;
  std::vector<CoilSpec> coils;
  std::vector<int> coilWinding;
  for (std::size_t wi = 0; wi < terminals.size(); ++wi) {
    Winding wd;
    wd.from = terminals[wi].first;
    wd.to = terminals[wi].second;
    const double lw = rating.voltage[wi] / (w * rating.magnetizingCurrent * rating.current[wi]);
    wd.turns = std::sqrt(lw / l1);
    const double zbase = rating.voltage[wi] / rating.current[wi];
    const std::size_t k1 = 2 * wi;
    const std::size_t k2 = 2 * wi + 1;
    const bool split = model.fraction[k1] > 0.0 && model.fraction[k2] > 0.0;
    if (split) wd.junction = c.addNode();
    auto coil = [&](std::size_t k, NodeId a, NodeId b) {
      CoilSpec cs;
      cs.a = a;
      cs.b = b;
      cs.leakage = model.leakage[k];
      cs.turns = std::sqrt(model.magnetizing[k] / l1);
      cs.resistance = rpu * zbase * model.fraction[k];
      coils.push_back(cs);
      coilWinding.push_back(static_cast<int>(wi));
    };
    if (split) {
      coil(k1, wd.from, wd.junction);
      coil(k2, wd.junction, wd.to);
    } else {
      coil(model.fraction[k1] > 0.0 ? k1 : k2, wd.from, wd.to);
    }
    out.windings.push_back(wd);
  }
  const auto ids = c.addCore(core, residual * ratedFlux, coils);
  for (std::size_t k = 0; k < ids.size(); ++k) {
    auto& wd = out.windings[static_cast<std::size_t>(coilWinding[k])];
    if (wd.firstCoil < 0) wd.firstCoil = ids[k];
  }
  return out;
}

TerminalProbe probeOf(const Winding& w) {
  TerminalProbe p;
  p.parts.emplace_back(w.firstCoil, 1.0);
  p.turns = w.turns;
  return p;
}

}  // namespace

BuiltNetwork buildNetwork(const EventSpec& spec, const SimulationSetup& setup) {
  setup.validate();
  const auto& net = setup.network;
  const auto& opt = setup.options;
  const double dt = 1.0 / opt.sampleRate;
  const double omega = 2.0 * std::numbers::pi * net.frequency;
  const double span = spec.kind == EventKind::Healthy && spec.inceptionTime <= 0.0
                          ? (opt.preCycles + opt.postCycles) / net.frequency
                          : spec.inceptionTime + opt.postCycles / net.frequency;
  spec.validate(span);

  BuiltNetwork bn{Circuit(dt, omega, net.strayConductance), {}, {}, {}, {}, {}};
  Circuit& c = bn.circuit;
  const double zb = net.baseImpedance();
  const double te = spec.inceptionTime;
  const double vpk = net.lineVoltage * std::sqrt(2.0 / 3.0) * net.sourceMagnitude;
  const double rb = net.breakerResistance;
  const double ro = net.openResistance;
  const bool inrush = spec.kind == EventKind::MagnetizingInrush;

  std::array<NodeId, 3> bus1{}, f1{}, busP{}, S{}, M{}, L{}, X{}, busQ{}, f2{}, bus2{};
  for (int p = 0; p < 3; ++p) {
    bus1[p] = c.addNode();
    f1[p] = c.addNode();
    busP[p] = c.addNode();
    S[p] = c.addNode();
    M[p] = c.addNode();
    L[p] = c.addNode();
    X[p] = c.addNode();
    busQ[p] = c.addNode();
    f2[p] = c.addNode();
    bus2[p] = c.addNode();
  }

  // Sources, lines, breakers, load.
  std::vector<std::pair<double, double>> steps;
  if (spec.kind == EventKind::Overexcitation && spec.switchTarget == SwitchTarget::Load) {
    steps.emplace_back(te, net.rejectionLevels.at(static_cast<std::size_t>(spec.switchLevel)));
  }
  const double sq = std::sqrt(std::max(0.0, 1.0 - net.loadPowerFactor * net.loadPowerFactor));
  for (int p = 0; p < 3; ++p) {
    const double ph = -2.0 * std::numbers::pi * p / 3.0;
    SourceWaveform e1{vpk, ph, steps};
    SourceWaveform e2{vpk, ph + net.source2Angle * std::numbers::pi / 180.0, steps};
    c.addSource(bus1[p], e1, net.source1R * zb, net.source1X * zb / omega);
    c.addSource(bus2[p], e2, net.source2R * zb, net.source2X * zb / omega);
    c.addRL(bus1[p], f1[p], 0.5 * net.line1R * zb, 0.5 * net.line1X * zb / omega);
    c.addRL(f1[p], busP[p], 0.5 * net.line1R * zb, 0.5 * net.line1X * zb / omega);
    c.addRL(busQ[p], f2[p], 0.5 * net.line2R * zb, 0.5 * net.line2X * zb / omega);
    c.addRL(f2[p], bus2[p], 0.5 * net.line2R * zb, 0.5 * net.line2X * zb / omega);
    bn.sourceBreaker[p] = c.addSwitch(busP[p], S[p], !inrush,
                                      inrush ? std::vector<double>{te} : std::vector<double>{}, rb, ro);
    c.addSwitch(L[p], busQ[p], !inrush, {}, rb, ro);
    if (net.loadP > 0.0) {
      const double s = net.loadP / net.loadPowerFactor;
      const double r = zb * net.loadP / (s * s);
      const double x = zb * s * sq / (s * s);
      c.addRL(bus2[p], kGround, r, x / omega);
    }
  }

  // Fault layout: which windings are split and where.
  const bool internal = isInternalFault(spec.kind);
  const bool seriesFaulted = internal && spec.unit == Unit::Series;
  const bool excitingFaulted = internal && spec.unit == Unit::Exciting;
  unsigned faultedPhases = 0;
  if (spec.kind == EventKind::InternalPhaseGround) faultedPhases = faultPhases(spec.faultType);
  if (spec.kind == EventKind::InternalTurnTurn || spec.kind == EventKind::InternalWindingWinding) {
    faultedPhases = 1u << spec.faultPhase;
  }

  const double rpu = setup.ispar.windingResistance;
  const auto exRating = setup.ispar.exciting.withTap(1, spec.tapRatio);
  std::array<UnitBuild, 3> seriesUnits, excitingUnits;
  for (int p = 0; p < 3; ++p) {
    const bool hit = (faultedPhases >> p) & 1u;
    const double r = inrush ? spec.residualFlux[p] : 0.0;
    // Quadrature winding across the other two phases' exciting secondaries.
    const int q1 = (p + 1) % 3;
    const int q2 = (p + 2) % 3;
    const auto w3 = spec.phaseShift == PhaseShift::Forward ? std::make_pair(X[q1], X[q2])
                                                           : std::make_pair(X[q2], X[q1]);
    const double sf = seriesFaulted && hit ? spec.windingPercent : 100.0;
    const auto sm = buildThreeWindingMatrix(setup.ispar.series, sf, 100.0);
    seriesUnits[p] = addUnit(c, sm, setup.ispar.series, setup.saturation, r, rpu,
                             {{S[p], M[p]}, {M[p], L[p]}, w3});
    const double ef = excitingFaulted && hit ? spec.windingPercent : 100.0;
    const auto em = buildTwoWindingMatrix(exRating, ef);
    excitingUnits[p] = addUnit(c, em, exRating, setup.saturation, r, rpu,
                               {{M[p], kGround}, {X[p], kGround}});
  }

  // Terminal probes before fault branches are attached.
  for (int p = 0; p < 3; ++p) {
    bn.sourceSide[p] = probeOf(seriesUnits[p].windings[0]);
    bn.loadSide[p] = probeOf(seriesUnits[p].windings[1]);
    bn.idealTerms[p].push_back(probeOf(seriesUnits[p].windings[2]));
    bn.idealTerms[p].push_back(probeOf(excitingUnits[p].windings[0]));
    bn.idealTerms[p].push_back(probeOf(excitingUnits[p].windings[1]));
  }

  auto shunt = [&](const std::array<NodeId, 3>& at, FaultType t, double rf) {
    const unsigned ph = faultPhases(t);
    const NodeId star = faultToGround(t) ? kGround : c.addNode();
    for (int p = 0; p < 3; ++p) {
      if ((ph >> p) & 1u) c.addSwitch(at[p], star, false, {te}, rf, ro);
    }
  };

  if (spec.kind == EventKind::InternalPhaseGround) {
    std::array<NodeId, 3> j{};
    for (int p = 0; p < 3; ++p) {
      const auto& u = seriesFaulted ? seriesUnits[p] : excitingUnits[p];
      const std::size_t wi = seriesFaulted ? (spec.side == Side::Primary ? 0 : 2)
                                           : (spec.side == Side::Primary ? 0 : 1);
      j[p] = u.windings[wi].junction;
    }
    shunt(j, spec.faultType, spec.faultResistance);
  } else if (spec.kind == EventKind::InternalTurnTurn) {
    const int p = spec.faultPhase;
    auto& u = seriesFaulted ? seriesUnits[p] : excitingUnits[p];
    const std::size_t wi = seriesFaulted ? (spec.side == Side::Primary ? 0 : 2)
                                         : (spec.side == Side::Primary ? 0 : 1);
    const auto& wd = u.windings[wi];
    const BranchId sw = c.addSwitch(wd.from, wd.junction, false, {te}, spec.faultResistance, ro);
    // The short starts at the dotted terminal, so its current enters the winding there.
    TerminalProbe* probe = nullptr;
    if (seriesFaulted && wi == 0) probe = &bn.sourceSide[p];
    else if (seriesFaulted) probe = &bn.idealTerms[p][0];
    else probe = &bn.idealTerms[p][1 + wi];
    probe->parts.emplace_back(sw, 1.0);
  } else if (spec.kind == EventKind::InternalWindingWinding) {
    const int p = spec.faultPhase;
    const auto& u = seriesFaulted ? seriesUnits[p] : excitingUnits[p];
    const NodeId a = u.windings[0].junction;
    const NodeId b = u.windings[seriesFaulted ? 2 : 1].junction;
    c.addSwitch(a, b, false, {te}, spec.faultResistance, ro);
  } else if (spec.kind == EventKind::ExternalFaultCtSat) {
    shunt(spec.faultLocation == LineLocation::Line1 ? f1 : f2, spec.faultType, spec.faultResistance);
  } else if (spec.kind == EventKind::SympatheticInrush) {
    const auto im = buildTwoWindingMatrix(net.incoming, 100.0);
    for (int p = 0; p < 3; ++p) {
      const NodeId t = c.addNode();
      const NodeId ts = c.addNode();
      bn.incomingBreaker[p] = c.addSwitch(busP[p], t, false, {te}, rb, ro);
      addUnit(c, im, net.incoming, setup.saturation, spec.residualFlux[p], rpu,
              {{t, kGround}, {ts, kGround}});
    }
  } else if (spec.kind == EventKind::Overexcitation && spec.switchTarget == SwitchTarget::Capacitor) {
    const double b = net.capacitorLevels.at(static_cast<std::size_t>(spec.switchLevel));
    const double cap = b / (zb * omega);
    for (int p = 0; p < 3; ++p) {
      const NodeId cn = c.addNode();
      c.addSwitch(busP[p], cn, false, {te}, rb, ro);
      c.addCapacitor(cn, kGround, cap);
    }
  }
  return bn;
}

}  // namespace ispar::sim
