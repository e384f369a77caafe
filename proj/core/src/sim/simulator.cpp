#include "ispar/sim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ispar/common/error.hpp"

namespace ispar::sim {

double inrushFlux(double t, double phiR, double phiM, double tPrime, double omega) {
  if (!(omega > 0.0)) throw InvalidInput("inrushFlux: omega must be positive");
  return phiR + phiM * std::cos(omega * tPrime) - phiM * std::cos(omega * (t + tPrime));
}

double inceptionTimeFor(int k, const SimulationSetup& setup) {
  return setup.options.preCycles / setup.network.frequency + 1.38e-3 * k;
}

double recordSpan(const EventSpec& spec, const SimulationSetup& setup) {
  const auto& o = setup.options;
  const double f = setup.network.frequency;
  if (spec.kind == EventKind::Healthy && spec.inceptionTime <= 0.0) {
    return (o.preCycles + o.postCycles) / f;
  }
  return spec.inceptionTime + o.postCycles / f;
}

WaveformRecord simulateEvent(const EventSpec& spec, const SimulationSetup& setup,
                             std::uint64_t seed) {
  BuiltNetwork bn = buildNetwork(spec, setup);
  Circuit& c = bn.circuit;
  const double dt = c.dt();
  const auto samples =
      static_cast<std::size_t>(std::floor(recordSpan(spec, setup) / dt + 1e-9)) + 1;

  WaveformRecord rec;
  rec.sampleRate = setup.options.sampleRate;
  rec.label = spec.kind;
  rec.unitLabel = spec.unit;
  rec.spec = spec;
  rec.seed = seed;

  const bool ct = spec.kind == EventKind::ExternalFaultCtSat;
  std::array<std::vector<double>, 3> src, load;
  for (int p = 0; p < 3; ++p) {
    rec.id[p].resize(samples);
    src[p].resize(samples);
    load[p].resize(samples);
  }
  c.initialize();
  for (std::size_t n = 0; n < samples; ++n) {
    if (n > 0) c.step();
    for (int p = 0; p < 3; ++p) {
      double ideal = 0.0;
      for (const auto& t : bn.idealTerms[p]) ideal += t.turns * t.read(c);
      rec.id[p][n] = ideal;
      src[p][n] = bn.sourceSide[p].read(c);
      load[p][n] = bn.loadSide[p].read(c);
    }
  }
  const double f = setup.network.frequency;
  for (int p = 0; p < 3; ++p) {
    if (ct) {
      src[p] = applyCurrentTransformer(src[p], setup.options.ctSource, dt, f);
      load[p] = applyCurrentTransformer(load[p], setup.options.ctLoad, dt, f);
    }
    const double ns = bn.sourceSide[p].turns;
    const double nl = bn.loadSide[p].turns;
    for (std::size_t n = 0; n < samples; ++n) rec.id[p][n] += ns * src[p][n] + nl * load[p][n];
  }

  for (const auto& ch : rec.id) {
    for (double v : ch) {
      if (!std::isfinite(v)) throw SimulationFault("simulation produced a non-finite sample");
    }
  }

  if (setup.options.noise) {
    // Noise is referred to the pre-event level so the event itself does not
    // raise the floor the detector sees before it. A zone that is dead before
    // the event falls back to the whole record and stays clean until energized.
    const auto firstEvent = std::min<std::size_t>(
        samples, spec.kind == EventKind::Healthy
                     ? samples
                     : static_cast<std::size_t>(std::ceil(spec.inceptionTime / dt - 1e-9)));
    auto rmsOver = [&](std::size_t from, std::size_t to) {
      double sum = 0.0;
      for (const auto& ch : rec.id) {
        for (std::size_t n = from; n < to; ++n) sum += ch[n] * ch[n];
      }
      return to > from ? std::sqrt(sum / static_cast<double>(3 * (to - from))) : 0.0;
    };
    double ref = rmsOver(0, firstEvent);
    std::size_t first = 0;
    if (ref == 0.0) {
      ref = rmsOver(0, samples);
      first = firstEvent;
    }
    const double sigma = ref * std::pow(10.0, -setup.options.noiseSnrDb / 20.0);
    if (sigma > 0.0) {
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> noise(0.0, sigma);
      for (std::size_t n = 0; n < samples; ++n) {
        for (int p = 0; p < 3; ++p) {
          const double e = noise(rng);
          if (n >= first) rec.id[p][n] += e;
        }
      }
    }
  }
  return rec;
}

}  // namespace ispar::sim
