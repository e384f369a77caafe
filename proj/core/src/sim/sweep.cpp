#include "ispar/sim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>

#include "ispar/common/binary_io.hpp"
#include "ispar/common/error.hpp"
#include "ispar/common/hash.hpp"
#include "ispar/common/parallel.hpp"
#include "ispar/sim/simulator.hpp"
#include "ispar/sim/waveform_store.hpp"
#include "json.hpp"

namespace ispar::sim {

using nlohmann::json;
namespace fs = std::filesystem;

std::vector<std::array<double, 3>> SweepDomains::residualCombos() const {
  std::vector<std::array<double, 3>> out;
  for (double r : residualLevels) {
    for (int p = 0; p < 3; ++p) {
      std::array<double, 3> c{-r / 2.0, -r / 2.0, -r / 2.0};
      c[static_cast<std::size_t>(p)] = r;
      for (double& v : c) v += 0.0;  // normalize -0.0
      out.push_back(c);
    }
  }
  return out;
}

std::vector<FaultType> SweepDomains::effectiveFaultTypes() const {
  if (!faultTypes.empty()) return faultTypes;
  std::vector<FaultType> all;
  for (int k = 0; k < kFaultTypeCount; ++k) all.push_back(static_cast<FaultType>(k));
  return all;
}

std::vector<EventSpec> enumerateGrid(EventKind kind, const SweepDomains& d,
                                     const SimulationSetup& setup) {
  std::vector<EventSpec> out;
  const auto types = d.effectiveFaultTypes();
  auto at = [&](int k) { return inceptionTimeFor(k, setup); };
  switch (kind) {
    case EventKind::Healthy:
      for (int k : d.timeSteps)
        for (double tap : d.seriesTaps)
          for (auto sh : d.shifts) {
            EventSpec s;
            s.kind = kind;
            s.inceptionTime = at(k);
            s.tapRatio = tap;
            s.phaseShift = sh;
            out.push_back(s);
          }
      break;
    case EventKind::InternalPhaseGround:
      for (Unit u : {Unit::Series, Unit::Exciting})
        for (double rf : d.phaseFaultResistances)
          for (double wp : d.windingPercents)
            for (auto ft : types)
              for (int k : d.timeSteps)
                for (Side sd : {Side::Primary, Side::Secondary})
                  for (auto sh : d.shifts)
                    for (double tap : u == Unit::Series ? d.seriesTaps : d.excitingTaps) {
                      EventSpec s;
                      s.kind = kind;
                      s.unit = u;
                      s.faultResistance = rf;
                      s.windingPercent = wp;
                      s.faultType = ft;
                      s.inceptionTime = at(k);
                      s.side = sd;
                      s.phaseShift = sh;
                      s.tapRatio = tap;
                      out.push_back(s);
                    }
      break;
    case EventKind::InternalTurnTurn:
    case EventKind::InternalWindingWinding: {
      const bool tt = kind == EventKind::InternalTurnTurn;
      const std::vector<Side> sides = tt ? std::vector<Side>{Side::Primary, Side::Secondary}
                                         : std::vector<Side>{Side::Primary};
      for (Unit u : {Unit::Series, Unit::Exciting})
        for (double rf : d.windingFaultResistances)
          for (double wp : d.windingPercents)
            for (int k : d.timeSteps)
              for (int ph = 0; ph < 3; ++ph)
                for (Side sd : sides)
                  for (auto sh : d.shifts)
                    for (double tap : u == Unit::Series ? d.seriesTaps : d.excitingTaps) {
                      EventSpec s;
                      s.kind = kind;
                      s.unit = u;
                      s.faultResistance = rf;
                      s.windingPercent = wp;
                      s.inceptionTime = at(k);
                      s.faultPhase = ph;
                      s.side = sd;
                      s.phaseShift = sh;
                      s.tapRatio = tap;
                      out.push_back(s);
                    }
      break;
    }
    case EventKind::MagnetizingInrush:
    case EventKind::SympatheticInrush:
      for (const auto& rc : d.residualCombos())
        for (int k : d.timeSteps)
          for (double tap : d.seriesTaps)
            for (auto sh : d.shifts) {
              EventSpec s;
              s.kind = kind;
              s.residualFlux = rc;
              s.inceptionTime = at(k);
              s.tapRatio = tap;
              s.phaseShift = sh;
              out.push_back(s);
            }
      break;
    case EventKind::Overexcitation:
      for (auto tg : d.switchTargets)
        for (int lv : d.switchLevels)
          for (int k : d.timeSteps)
            for (double tap : d.seriesTaps)
              for (auto sh : d.shifts) {
                EventSpec s;
                s.kind = kind;
                s.switchTarget = tg;
                s.switchLevel = lv;
                s.inceptionTime = at(k);
                s.tapRatio = tap;
                s.phaseShift = sh;
                out.push_back(s);
              }
      break;
    case EventKind::ExternalFaultCtSat:
      for (double rf : d.phaseFaultResistances)
        for (auto ft : types)
          for (int k : d.timeSteps)
            for (double tap : d.seriesTaps)
              for (auto sh : d.shifts)
                for (auto loc : d.locations) {
                  EventSpec s;
                  s.kind = kind;
                  s.faultResistance = rf;
                  s.faultType = ft;
                  s.inceptionTime = at(k);
                  s.tapRatio = tap;
                  s.phaseShift = sh;
                  s.faultLocation = loc;
                  out.push_back(s);
                }
      break;
  }
  for (const auto& s : out) s.validate(recordSpan(s, setup));
  return out;
}

std::vector<ManifestEntry> planSweep(const SweepConfig& cfg, const SimulationSetup& setup) {
  std::vector<ManifestEntry> plan;
  for (std::size_t ki = 0; ki < cfg.kinds.size(); ++ki) {
    const auto& ks = cfg.kinds[ki];
    auto grid = enumerateGrid(ks.kind, cfg.domains, setup);
    std::size_t want = grid.size();
    if (ks.count) {
      want = std::min(*ks.count, grid.size());
    } else {
      if (!(ks.fraction >= 0.0 && ks.fraction <= 1.0)) {
        throw InvalidInput("sweep: sampling fraction must lie in [0, 1]");
      }
      want = static_cast<std::size_t>(std::llround(ks.fraction * static_cast<double>(grid.size())));
    }
    std::vector<std::size_t> idx(grid.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    if (want < grid.size()) {
      std::mt19937_64 rng(deriveSeed(cfg.seed, 0x5eed0000ULL + static_cast<std::uint64_t>(ks.kind)));
      // Partial Fisher-Yates; the chosen subset is then kept in grid order.
      for (std::size_t i = 0; i < want; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
        std::swap(idx[i], idx[pick(rng)]);
      }
      idx.resize(want);
      std::sort(idx.begin(), idx.end());
    }
    for (std::size_t i : idx) {
      ManifestEntry e;
      e.spec = grid[i];
      plan.push_back(std::move(e));
    }
  }
  for (std::size_t i = 0; i < plan.size(); ++i) {
    plan[i].id = i;
    char name[32];
    std::snprintf(name, sizeof name, "rec_%06zu.wfm", i);
    plan[i].file = name;
    plan[i].seed = deriveSeed(cfg.seed, i);
  }
  return plan;
}

namespace {

json specToJson(const EventSpec& s) {
  return json{{"kind", toString(s.kind)},
              {"unit", toString(s.unit)},
              {"side", toString(s.side)},
              {"faultType", toString(s.faultType)},
              {"faultPhase", s.faultPhase},
              {"faultResistance", s.faultResistance},
              {"windingPercent", s.windingPercent},
              {"inceptionTime", s.inceptionTime},
              {"phaseShift", toString(s.phaseShift)},
              {"tapRatio", s.tapRatio},
              {"switchTarget", toString(s.switchTarget)},
              {"switchLevel", s.switchLevel},
              {"faultLocation", toString(s.faultLocation)},
              {"residualFlux", s.residualFlux}};
}

EventSpec specFromJson(const json& j) {
  EventSpec s;
  s.kind = parseEventKind(j.at("kind").get<std::string>());
  s.unit = parseUnit(j.at("unit").get<std::string>());
  s.side = parseSide(j.at("side").get<std::string>());
  s.faultType = parseFaultType(j.at("faultType").get<std::string>());
  s.faultPhase = j.at("faultPhase").get<int>();
  s.faultResistance = j.at("faultResistance").get<double>();
  s.windingPercent = j.at("windingPercent").get<double>();
  s.inceptionTime = j.at("inceptionTime").get<double>();
  s.phaseShift = parsePhaseShift(j.at("phaseShift").get<std::string>());
  s.tapRatio = j.at("tapRatio").get<double>();
  s.switchTarget = parseSwitchTarget(j.at("switchTarget").get<std::string>());
  s.switchLevel = j.at("switchLevel").get<int>();
  s.faultLocation = parseLineLocation(j.at("faultLocation").get<std::string>());
  s.residualFlux = j.at("residualFlux").get<std::array<double, 3>>();
  return s;
}

}  // namespace

std::string manifestHeaderLine(const std::map<std::string, std::size_t>& counts,
                               std::uint64_t seed) {
  json j{{"type", "header"}, {"version", 1}, {"seed", seed}, {"classCounts", counts}};
  return j.dump();
}

std::string manifestLine(const ManifestEntry& e) {
  json j{{"type", "record"},
         {"id", e.id},
         {"file", e.file},
         {"label", toString(e.spec.kind)},
         {"unitLabel", toString(e.spec.unit)},
         {"seed", e.seed},
         {"spec", specToJson(e.spec)}};
  return j.dump();
}

std::vector<ManifestEntry> readManifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("manifest: cannot open " + path);
  std::vector<ManifestEntry> out;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    try {
      const auto j = json::parse(line);
      if (j.at("type") == "header") continue;
      ManifestEntry e;
      e.id = j.at("id").get<std::size_t>();
      e.file = j.at("file").get<std::string>();
      e.seed = j.at("seed").get<std::uint64_t>();
      e.spec = specFromJson(j.at("spec"));
      out.push_back(std::move(e));
    } catch (const json::exception& ex) {
      throw FormatError("manifest: line " + std::to_string(lineNo) + ": " + ex.what());
    } catch (const InvalidInput& ex) {
      throw FormatError("manifest: line " + std::to_string(lineNo) + ": " + ex.what());
    }
  }
  return out;
}

SweepSummary runSweep(const SweepConfig& cfg, const SimulationSetup& setup,
                      const std::string& storeDir, int jobs, const ProgressFn& progress) {
  setup.validate();
  SweepSummary summary;
  summary.entries = planSweep(cfg, setup);
  for (const auto& e : summary.entries) ++summary.classCounts[std::string(toString(e.spec.kind))];
  const auto& entries = summary.entries;

  const fs::path dir(storeDir);
  fs::create_directories(dir);
  std::vector<char> written(entries.size(), 0);
  std::atomic<std::size_t> done{0};
  std::mutex progressMutex;
  const fs::path manifestPath = dir / std::string(kManifestName);
  try {
    parallelFor(entries.size(), jobs, [&](std::size_t i) {
      const auto& e = entries[i];
      const auto rec = simulateEvent(e.spec, setup, e.seed);
      writeWaveform((dir / e.file).string(), rec);
      written[i] = 1;
      const std::size_t d = ++done;
      if (progress) {
        std::lock_guard lock(progressMutex);
        progress(d, entries.size());
      }
    });
    std::ostringstream m;
    m << manifestHeaderLine(summary.classCounts, cfg.seed) << '\n';
    for (const auto& e : entries) m << manifestLine(e) << '\n';
    io::writeFileAtomic(manifestPath.string(), m.str());
  } catch (...) {
    std::error_code ec;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (written[i]) fs::remove(dir / entries[i].file, ec);
    }
    fs::remove(manifestPath, ec);
    throw;
  }
  return summary;
}

}  // namespace ispar::sim
