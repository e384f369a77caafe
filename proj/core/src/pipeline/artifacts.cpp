#include "ispar/pipeline/artifacts.hpp"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <sstream>

#include "ispar/common/binary_io.hpp"
#include "ispar/common/error.hpp"
#include "ispar/common/hash.hpp"
#include "json.hpp"

namespace ispar::pipeline {

using nlohmann::json;
namespace fs = std::filesystem;

const std::vector<std::string>& stageOrder() {
  static const std::vector<std::string> order{"simulate", "detect", "extract", "select",
                                              "train",    "evaluate", "report"};
  return order;
}

std::string upstreamOf(const std::string& stage) {
  const auto& o = stageOrder();
  const auto it = std::find(o.begin(), o.end(), stage);
  if (it == o.end()) throw ConfigError("unknown stage '" + stage + "'");
  return it == o.begin() ? std::string{} : *(it - 1);
}

std::string stageKey(const PipelineConfig& cfg, const std::string& stage) {
  const auto up = upstreamOf(stage);
  const std::string upKey = up.empty() ? std::string{} : stageKey(cfg, up);
  return toHex(fnv1a64(stage + "\n" + stageSection(cfg, stage) + "\n" + upKey));
}

std::string stagePath(const std::string& root, const std::string& stage) { return (fs::path(root) / stage).string(); }
std::string logsPath(const std::string& root) { return (fs::path(root) / "logs").string(); }

std::string fileDigest(const std::string& path) { return toHex(fnv1a64(io::readFile(path))); }

void writeStageInfo(const std::string& root, const StageInfo& info) {
  json files = json::object();
  for (const auto& [k, v] : info.files) files[k] = v;
  const json j{{"stage", info.stage}, {"key", info.key}, {"upstreamKey", info.upstreamKey}, {"files", files}};
  io::writeFileAtomic((fs::path(stagePath(root, info.stage)) / "stage.json").string(), j.dump(2) + "\n");
}

StageInfo readStageInfo(const std::string& root, const std::string& stage) {
  const auto path = fs::path(stagePath(root, stage)) / "stage.json";
  if (!fs::exists(path)) {
    throw MissingArtifact(stage, "stage '" + stage + "' has not been run in " + root + "; run `ispar " + stage + "` first");
  }
  try {
    const auto j = json::parse(io::readFile(path.string()));
    StageInfo info;
    info.stage = j.at("stage").get<std::string>();
    info.key = j.at("key").get<std::string>();
    info.upstreamKey = j.at("upstreamKey").get<std::string>();
    for (const auto& [k, v] : j.at("files").items()) info.files[k] = v.get<std::string>();
    return info;
  } catch (const json::exception& e) {
    throw MissingArtifact(stage, "stage '" + stage + "' record is unreadable (" + e.what() + "); rerun `ispar " + stage + "`");
  }
}

void requireUpstream(const std::string& root, const PipelineConfig& cfg, const std::string& stage) {
  const auto up = upstreamOf(stage);
  if (up.empty()) return;
  requireUpstream(root, cfg, up);
  const auto info = readStageInfo(root, up);
  if (info.key != stageKey(cfg, up)) {
    throw MissingArtifact(up, "stage '" + up + "' was built with a different config; rerun `ispar " + up + "`");
  }
  for (const auto& [name, digest] : info.files) {
    const auto path = (fs::path(stagePath(root, up)) / name).string();
    if (!fs::exists(path)) {
      throw MissingArtifact(up, "artifact '" + name + "' of stage '" + up + "' is missing; rerun `ispar " + up + "`");
    }
    if (fileDigest(path) != digest) {
      throw MissingArtifact(up, "artifact '" + name + "' of stage '" + up + "' was modified; rerun `ispar " + up + "`");
    }
  }
}

void writeRunManifest(const std::string& root, const PipelineConfig& cfg) {
  json stages = json::object();
  for (const auto& s : stageOrder()) {
    if (fs::exists(fs::path(stagePath(root, s)) / "stage.json")) stages[s] = readStageInfo(root, s).key;
  }
  const json j{{"configHash", configHash(cfg)},
               {"seed", cfg.seed},
               {"seeds",
                {{"sweep", sweepSeed(cfg)}, {"model", modelSeed(cfg)}, {"cv", cvSeed(cfg)}, {"selection", selectionSeed(cfg)}}},
               {"stages", stages}};
  io::writeFileAtomic((fs::path(root) / "run_manifest.json").string(), j.dump(2) + "\n");
}

namespace {

constexpr char kCaptureMagic[8] = {'I', 'S', 'P', 'A', 'R', 'C', 'P', '1'};
constexpr std::uint32_t kCaptureVersion = 1;

}  // namespace

std::string encodeCaptures(const std::vector<CaptureRecord>& captures, std::size_t windowLength) {
  std::ostringstream out(std::ios::binary);
  out.write(kCaptureMagic, 8);
  io::writeU32(out, kCaptureVersion);
  io::writeU32(out, static_cast<std::uint32_t>(windowLength));
  io::writeU64(out, captures.size());
  for (int i = 0; i < 5; ++i) io::writeU64(out, 0);
  for (const auto& c : captures) {
    io::writeU64(out, c.recordId);
    io::writeU32(out, static_cast<std::uint32_t>(c.kind));
    io::writeU32(out, static_cast<std::uint32_t>(c.unit));
    io::writeU64(out, c.window.startIndex);
    io::writeU32(out, static_cast<std::uint32_t>(c.window.triggerPhase));
    io::writeU32(out, 0);
    for (const auto& ph : c.window.samples) {
      if (ph.size() != windowLength) throw InvalidInput("captures: window length differs from the set");
      io::writeF64s(out, ph);
    }
  }
  return out.str();
}

std::vector<CaptureRecord> decodeCaptures(std::string_view bytes, std::size_t* windowLength) {
  if (bytes.size() < kCaptureHeaderBytes || std::memcmp(bytes.data(), kCaptureMagic, 8) != 0) {
    throw FormatError("captures: bad magic or truncated header");
  }
  std::istringstream in(std::string(bytes), std::ios::binary);
  in.ignore(8);
  if (io::readU32(in) != kCaptureVersion) throw FormatError("captures: unsupported version");
  const std::size_t n = io::readU32(in);
  const std::size_t count = io::readU64(in);
  in.ignore(40);
  const std::size_t perRecord = 32 + 3 * 8 * n;
  if (bytes.size() != kCaptureHeaderBytes + count * perRecord) throw FormatError("captures: size does not match header");
  std::vector<CaptureRecord> out(count);
  for (auto& c : out) {
    c.recordId = io::readU64(in);
    const auto kind = io::readU32(in);
    const auto unit = io::readU32(in);
    if (kind >= static_cast<std::uint32_t>(sim::kEventKindCount) || unit > 2) throw FormatError("captures: bad label");
    c.kind = static_cast<sim::EventKind>(kind);
    c.unit = static_cast<sim::Unit>(unit);
    c.window.startIndex = io::readU64(in);
    c.window.triggerPhase = static_cast<int>(io::readU32(in));
    io::readU32(in);
    for (auto& ph : c.window.samples) ph = io::readF64s(in, n);
  }
  if (windowLength) *windowLength = n;
  return out;
}

std::string featureSpecToJson(const features::FeatureSpec& spec) {
  json fams = json::array();
  for (auto f : spec.families) fams.push_back(features::toString(f));
  json energies = json::array();
  for (const auto& e : spec.energies) energies.push_back(e.name());
  const auto& p = spec.time;
  json pairs = json::array();
  for (const auto& q : p.quantilePairs) pairs.push_back({q.first, q.second});
  const json time{{"arOrder", p.arOrder},
                  {"quantilePairs", pairs},
                  {"corridor", {p.corridor.first, p.corridor.second}},
                  {"trendWindow", p.trendWindow},
                  {"trendAggregate", features::toString(p.trendAggregate)},
                  {"acLags", p.acLags},
                  {"acLag", p.acLag},
                  {"peakSupport", p.peakSupport},
                  {"chunkCount", p.chunkCount},
                  {"chunk", p.chunk}};
  const json j{{"mode", features::toString(spec.mode)},
               {"coeffs", {{"wavelet", spec.coeffs.wavelet}, {"level", spec.coeffs.level}}},
               {"families", fams},
               {"time", time},
               {"extended", spec.extended},
               {"energies", energies},
               {"poolWavelets", spec.poolWavelets}};
  return j.dump(2);
}

features::FeatureSpec featureSpecFromJson(const std::string& text) {
  try {
    const auto j = json::parse(text);
    features::FeatureSpec s;
    s.mode = features::parseFeatureMode(j.at("mode").get<std::string>());
    s.coeffs = {j.at("coeffs").at("wavelet").get<std::string>(), j.at("coeffs").at("level").get<int>()};
    s.families.clear();
    for (const auto& f : j.at("families")) s.families.push_back(features::parseTimeFamily(f.get<std::string>()));
    const auto& t = j.at("time");
    s.time.arOrder = t.at("arOrder").get<int>();
    s.time.quantilePairs = t.at("quantilePairs").get<std::vector<std::pair<double, double>>>();
    s.time.corridor = t.at("corridor").get<std::pair<double, double>>();
    s.time.trendWindow = t.at("trendWindow").get<int>();
    s.time.trendAggregate = features::parseTrendAggregate(t.at("trendAggregate").get<std::string>());
    s.time.acLags = t.at("acLags").get<std::vector<int>>();
    s.time.acLag = t.at("acLag").get<int>();
    s.time.peakSupport = t.at("peakSupport").get<int>();
    s.time.chunkCount = t.at("chunkCount").get<int>();
    s.time.chunk = t.at("chunk").get<int>();
    s.extended = j.at("extended").get<bool>();
    for (const auto& e : j.at("energies")) s.energies.push_back(features::EnergyTerm::parse(e.get<std::string>()));
    s.poolWavelets = j.at("poolWavelets").get<std::vector<std::string>>();
    return s;
  } catch (const json::exception& e) {
    throw FormatError(std::string("feature spec: ") + e.what());
  }
}

}  // namespace ispar::pipeline
