#include "ispar/pipeline/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "ispar/common/error.hpp"
#include "ispar/common/hash.hpp"
#include "ispar/features/wavelet.hpp"
#include "json.hpp"

namespace ispar::pipeline {

using nlohmann::json;

std::string toString(Task t) {
  switch (t) {
    case Task::Detect: return "detect";
    case Task::Locate: return "locate";
    case Task::Identify: return "identify";
  }
  return "?";
}

Task parseTask(const std::string& s) {
  for (auto t : kTasks) {
    if (toString(t) == s) return t;
  }
  throw ConfigError("unknown task '" + s + "'");
}

std::vector<std::string> taskClassNames(Task t) {
  switch (t) {
    case Task::Detect: return {"no-fault", "internal-fault"};
    case Task::Locate: return {"series", "exciting"};
    case Task::Identify: return {"magnetizing-inrush", "sympathetic-inrush", "overexcitation", "external-fault"};
  }
  return {};
}

namespace {

// Object view that remembers which keys were read; finish() rejects the rest.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }
  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }
  std::string path(const std::string& key) const { return path_ + "." + key; }

  template <class T>
  void read(const std::string& key, T& out) {
    if (!has(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(path(key) + ": wrong type");
    }
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) throw ConfigError(path_ + ": unknown key '" + k + "'");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class T>
void readUnsigned(Section& s, const std::string& key, T& out) {
  if (!s.has(key)) return;
  const auto& v = s.raw(key);
  if (!v.is_number_unsigned()) throw ConfigError(s.path(key) + ": expected a non-negative integer");
  out = v.get<T>();
}

template <class Parse>
auto parseName(Parse&& parse, const std::string& value, const std::string& where) {
  try {
    return parse(value);
  } catch (const std::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

ml::ModelSpec parseModel(const json& j, const std::string& where) {
  Section s(j, where);
  std::string kind;
  s.read("kind", kind);
  if (kind.empty()) throw ConfigError(where + ": missing 'kind'");
  ml::ModelSpec m;
  m.kind = parseName([](const std::string& v) { return ml::parseModelKind(v); }, kind, s.path("kind"));
  switch (m.kind) {
    case ml::ModelKind::DT:
      s.read("maxDepth", m.dt.maxDepth);
      s.read("minLeaf", m.dt.minLeaf);
      break;
    case ml::ModelKind::RF:
      s.read("nTrees", m.rf.nTrees);
      s.read("maxDepth", m.rf.maxDepth);
      s.read("minLeaf", m.rf.minLeaf);
      s.read("maxFeatures", m.rf.maxFeatures);
      s.read("bootstrap", m.rf.bootstrap);
      break;
    case ml::ModelKind::GB:
      s.read("learningRate", m.gb.learningRate);
      s.read("nEstimators", m.gb.nEstimators);
      s.read("maxDepth", m.gb.maxDepth);
      s.read("minLeaf", m.gb.minLeaf);
      s.read("subsample", m.gb.subsample);
      break;
    case ml::ModelKind::KNN: {
      s.read("k", m.knn.k);
      std::string metric = ml::toString(m.knn.metric);
      s.read("metric", metric);
      m.knn.metric = parseName([](const std::string& v) { return ml::parseMetric(v); }, metric, s.path("metric"));
      s.read("standardize", m.knn.standardize);
      break;
    }
    case ml::ModelKind::GNB:
      s.read("varianceFloor", m.gnb.varianceFloor);
      break;
    case ml::ModelKind::MLP: {
      s.read("hiddenSizes", m.mlp.hiddenSizes);
      std::string act = ml::toString(m.mlp.activation), sched = ml::toString(m.mlp.schedule);
      s.read("activation", act);
      s.read("schedule", sched);
      m.mlp.activation = parseName([](const std::string& v) { return ml::parseActivation(v); }, act,
                                   s.path("activation"));
      m.mlp.schedule = parseName([](const std::string& v) { return ml::parseLrSchedule(v); }, sched,
                                 s.path("schedule"));
      s.read("l2Alpha", m.mlp.l2Alpha);
      s.read("learningRate", m.mlp.learningRate);
      s.read("epochs", m.mlp.epochs);
      s.read("batchSize", m.mlp.batchSize);
      s.read("tolerance", m.mlp.tolerance);
      s.read("patience", m.mlp.patience);
      break;
    }
  }
  s.finish();
  try {
    m.validate();
  } catch (const std::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return m;
}

json modelJson(const ml::ModelSpec& m) {
  json j{{"kind", ml::toString(m.kind)}};
  switch (m.kind) {
    case ml::ModelKind::DT:
      j["maxDepth"] = m.dt.maxDepth;
      j["minLeaf"] = m.dt.minLeaf;
      break;
    case ml::ModelKind::RF:
      j["nTrees"] = m.rf.nTrees;
      j["maxDepth"] = m.rf.maxDepth;
      j["minLeaf"] = m.rf.minLeaf;
      j["maxFeatures"] = m.rf.maxFeatures;
      j["bootstrap"] = m.rf.bootstrap;
      break;
    case ml::ModelKind::GB:
      j["learningRate"] = m.gb.learningRate;
      j["nEstimators"] = m.gb.nEstimators;
      j["maxDepth"] = m.gb.maxDepth;
      j["minLeaf"] = m.gb.minLeaf;
      j["subsample"] = m.gb.subsample;
      break;
    case ml::ModelKind::KNN:
      j["k"] = m.knn.k;
      j["metric"] = ml::toString(m.knn.metric);
      j["standardize"] = m.knn.standardize;
      break;
    case ml::ModelKind::GNB:
      j["varianceFloor"] = m.gnb.varianceFloor;
      break;
    case ml::ModelKind::MLP:
      j["hiddenSizes"] = m.mlp.hiddenSizes;
      j["activation"] = ml::toString(m.mlp.activation);
      j["schedule"] = ml::toString(m.mlp.schedule);
      j["l2Alpha"] = m.mlp.l2Alpha;
      j["learningRate"] = m.mlp.learningRate;
      j["epochs"] = m.mlp.epochs;
      j["batchSize"] = m.mlp.batchSize;
      j["tolerance"] = m.mlp.tolerance;
      j["patience"] = m.mlp.patience;
      break;
  }
  return j;
}

std::vector<ml::ModelSpec> parseModelList(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a non-empty array of models");
  std::vector<ml::ModelSpec> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parseModel(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<features::TimeFamily> parseFamilies(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a non-empty array of families");
  std::vector<features::TimeFamily> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw ConfigError(where + ": family names are strings");
    out.push_back(parseName([](const std::string& s) { return features::parseTimeFamily(s); }, v.get<std::string>(),
                            where));
  }
  return out;
}

void parseSimulation(const json& j, SimulationConfig& sc) {
  Section s(j, "simulation");
  if (s.has("kinds")) {
    const auto& arr = s.raw("kinds");
    if (!arr.is_array()) throw ConfigError("simulation.kinds: expected an array");
    sc.kinds.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = "simulation.kinds[" + std::to_string(i) + "]";
      Section k(arr[i], where);
      std::string kind;
      k.read("kind", kind);
      sim::KindSampling ks;
      ks.kind = parseName([](const std::string& v) { return sim::parseEventKind(v); }, kind, k.path("kind"));
      if (k.has("count")) {
        std::size_t c = 0;
        readUnsigned(k, "count", c);
        ks.count = c;
      }
      k.read("fraction", ks.fraction);
      k.finish();
      sc.kinds.push_back(ks);
    }
  }
  s.read("noise", sc.noise);
  s.read("noiseSnrDb", sc.noiseSnrDb);
  s.finish();
}

void parseTime(const json& j, features::TimeFeatureParams& p) {
  Section s(j, "features.time");
  s.read("arOrder", p.arOrder);
  s.read("corridor", p.corridor);
  s.read("trendWindow", p.trendWindow);
  if (s.has("trendAggregate")) {
    std::string a;
    s.read("trendAggregate", a);
    p.trendAggregate =
        parseName([](const std::string& v) { return features::parseTrendAggregate(v); }, a, "features.time.trendAggregate");
  }
  s.read("acLag", p.acLag);
  s.read("peakSupport", p.peakSupport);
  s.read("chunkCount", p.chunkCount);
  s.read("chunk", p.chunk);
  s.finish();
}

void parseFeatures(const json& j, FeaturesConfig& fc) {
  Section s(j, "features");
  s.read("mode", fc.mode);
  s.read("poolWavelets", fc.poolWavelets);
  if (s.has("tasks")) {
    Section t(s.raw("tasks"), "features.tasks");
    for (auto task : kTasks) {
      const auto name = toString(task);
      if (t.has(name)) fc.taskFamilies[static_cast<std::size_t>(task)] = parseFamilies(t.raw(name), t.path(name));
    }
    t.finish();
  }
  if (s.has("time")) parseTime(s.raw("time"), fc.time);
  s.finish();
}

void parseSelection(const json& j, SelectionConfig& sc) {
  Section s(j, "selection");
  s.read("method", sc.method);
  s.read("count", sc.count);
  s.read("bins", sc.bins);
  if (s.has("waveletSearch")) {
    Section w(s.raw("waveletSearch"), "selection.waveletSearch");
    w.read("enabled", sc.waveletSearch.enabled);
    w.read("wavelets", sc.waveletSearch.wavelets);
    w.read("runs", sc.waveletSearch.runs);
    w.finish();
  }
  s.finish();
}

json simulationJson(const PipelineConfig& c) {
  json kinds = json::array();
  for (const auto& k : c.simulation.kinds) {
    json e{{"kind", std::string(sim::toString(k.kind))}};
    if (k.count) e["count"] = *k.count;
    else e["fraction"] = k.fraction;
    kinds.push_back(e);
  }
  return json{{"kinds", kinds}, {"noise", c.simulation.noise}, {"noiseSnrDb", c.simulation.noiseSnrDb}};
}

json featuresJson(const PipelineConfig& c) {
  const auto& f = c.features;
  json tasks = json::object();
  for (auto t : kTasks) {
    json fams = json::array();
    for (auto fam : f.taskFamilies[static_cast<std::size_t>(t)]) fams.push_back(features::toString(fam));
    tasks[toString(t)] = fams;
  }
  const auto& p = f.time;
  json time{{"arOrder", p.arOrder},
            {"corridor", {p.corridor.first, p.corridor.second}},
            {"trendWindow", p.trendWindow},
            {"trendAggregate", features::toString(p.trendAggregate)},
            {"acLag", p.acLag},
            {"peakSupport", p.peakSupport},
            {"chunkCount", p.chunkCount},
            {"chunk", p.chunk}};
  return json{{"mode", f.mode}, {"poolWavelets", f.poolWavelets}, {"tasks", tasks}, {"time", time}};
}

json selectionJson(const PipelineConfig& c) {
  const auto& s = c.selection;
  return json{{"method", s.method},
              {"count", s.count},
              {"bins", s.bins},
              {"waveletSearch",
               {{"enabled", s.waveletSearch.enabled},
                {"wavelets", s.waveletSearch.wavelets},
                {"runs", s.waveletSearch.runs}}}};
}

json modelsJson(const std::vector<ml::ModelSpec>& list) {
  json a = json::array();
  for (const auto& m : list) a.push_back(modelJson(m));
  return a;
}

json fullJson(const PipelineConfig& c) {
  return json{{"seed", c.seed},
              {"stageDir", c.stageDir},
              {"simulation", simulationJson(c)},
              {"detector", {{"alpha", c.detector.alpha}, {"cycleSamples", c.detector.cycleSamples}}},
              {"features", featuresJson(c)},
              {"selection", selectionJson(c)},
              {"models", {{"grid", modelsJson(c.grid)}, {"evaluate", modelsJson(c.evaluate)}}},
              {"cv", {{"folds", c.folds}}},
              {"timing", {{"runs", c.timingRuns}}}};
}

}  // namespace

void PipelineConfig::validate() const {
  auto wrap = [](const char* where, auto&& fn) {
    try {
      fn();
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(std::string(where) + ": " + e.what());
    }
  };
  if (simulation.kinds.empty()) throw ConfigError("simulation.kinds: at least one kind is required");
  for (const auto& k : simulation.kinds) {
    if (!k.count && !(k.fraction >= 0.0 && k.fraction <= 1.0)) {
      throw ConfigError("simulation.kinds: fraction must lie in [0, 1]");
    }
  }
  if (!(simulation.noiseSnrDb > 0.0)) throw ConfigError("simulation.noiseSnrDb: must be positive");
  wrap("detector", [&] { detector.validate(); });
  if (features.mode != "combined" && features.mode != "time") {
    throw ConfigError("features.mode: expected 'combined' or 'time'");
  }
  if (features.poolWavelets.empty()) throw ConfigError("features.poolWavelets: at least one wavelet is required");
  for (const auto& w : features.poolWavelets) {
    if (!features::WaveletCatalog::builtin().contains(w)) throw ConfigError("features.poolWavelets: unknown wavelet '" + w + "'");
  }
  wrap("features.time", [&] { features.time.validate(static_cast<std::size_t>(detector.cycleSamples)); });
  if (selection.method != "mrmr" && selection.method != "rf-importance") {
    throw ConfigError("selection.method: expected 'mrmr' or 'rf-importance'");
  }
  if (selection.count < 1) throw ConfigError("selection.count: must be >= 1");
  if (selection.bins < 2) throw ConfigError("selection.bins: must be >= 2");
  if (selection.waveletSearch.runs < 1) throw ConfigError("selection.waveletSearch.runs: must be >= 1");
  for (const auto& w : selection.waveletSearch.wavelets) {
    if (!features::WaveletCatalog::builtin().contains(w)) {
      throw ConfigError("selection.waveletSearch.wavelets: unknown wavelet '" + w + "'");
    }
  }
  if (grid.empty()) throw ConfigError("models.grid: at least one model is required");
  if (evaluate.empty()) throw ConfigError("models.evaluate: at least one model is required");
  for (const auto& m : grid) wrap("models.grid", [&] { m.validate(); });
  for (const auto& m : evaluate) wrap("models.evaluate", [&] { m.validate(); });
  if (folds < 2) throw ConfigError("cv.folds: must be >= 2");
  if (timingRuns < 1) throw ConfigError("timing.runs: must be >= 1");
  if (stageDir.empty()) throw ConfigError("stageDir: must not be empty");
}

PipelineConfig parseConfig(const std::string& jsonText) {
  json root;
  try {
    root = json::parse(jsonText);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  PipelineConfig c;
  Section s(root, "config");
  readUnsigned(s, "seed", c.seed);
  s.read("stageDir", c.stageDir);
  if (s.has("simulation")) parseSimulation(s.raw("simulation"), c.simulation);
  if (s.has("detector")) {
    Section d(s.raw("detector"), "detector");
    d.read("alpha", c.detector.alpha);
    d.read("cycleSamples", c.detector.cycleSamples);
    d.finish();
  }
  if (s.has("features")) parseFeatures(s.raw("features"), c.features);
  if (s.has("selection")) parseSelection(s.raw("selection"), c.selection);
  if (s.has("models")) {
    Section m(s.raw("models"), "models");
    if (m.has("grid")) c.grid = parseModelList(m.raw("grid"), "models.grid");
    if (m.has("evaluate")) c.evaluate = parseModelList(m.raw("evaluate"), "models.evaluate");
    m.finish();
  }
  if (s.has("cv")) {
    Section cv(s.raw("cv"), "cv");
    cv.read("folds", c.folds);
    cv.finish();
  }
  if (s.has("timing")) {
    Section t(s.raw("timing"), "timing");
    t.read("runs", c.timingRuns);
    t.finish();
  }
  s.finish();
  c.validate();
  return c;
}

PipelineConfig loadConfig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parseConfig(ss.str());
}

std::string canonicalJson(const PipelineConfig& cfg) {
  // stageDir is where artifacts go, not what they contain.
  auto j = fullJson(cfg);
  j.erase("stageDir");
  return j.dump(2) + "\n";
}

std::string configHash(const PipelineConfig& cfg) { return toHex(fnv1a64(canonicalJson(cfg))); }

std::string stageSection(const PipelineConfig& cfg, const std::string& stage) {
  const auto full = fullJson(cfg);
  json j;
  if (stage == "simulate") {
    j = json{{"seed", cfg.seed}, {"simulation", full["simulation"]}};
  } else if (stage == "detect") {
    j = json{{"detector", full["detector"]}};
  } else if (stage == "extract") {
    j = json{{"features", full["features"]}};
  } else if (stage == "select") {
    j = json{{"seed", cfg.seed}, {"selection", full["selection"]}};
  } else if (stage == "train") {
    j = json{{"seed", cfg.seed}, {"grid", full["models"]["grid"]}, {"cv", full["cv"]}};
  } else if (stage == "evaluate") {
    j = json{{"seed", cfg.seed}, {"evaluate", full["models"]["evaluate"]}, {"cv", full["cv"]}};
  } else if (stage == "report") {
    j = json::object();
  } else {
    throw ConfigError("unknown stage '" + stage + "'");
  }
  return j.dump();
}

std::uint64_t sweepSeed(const PipelineConfig& cfg) { return deriveSeed(cfg.seed, 1); }
std::uint64_t modelSeed(const PipelineConfig& cfg) { return deriveSeed(cfg.seed, 2); }
std::uint64_t cvSeed(const PipelineConfig& cfg) { return deriveSeed(cfg.seed, 3); }
std::uint64_t selectionSeed(const PipelineConfig& cfg) { return deriveSeed(cfg.seed, 4); }

}  // namespace ispar::pipeline
