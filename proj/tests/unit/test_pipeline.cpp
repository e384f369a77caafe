#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "ispar/common/binary_io.hpp"
#include "ispar/common/error.hpp"
#include "ispar/features/feature_matrix.hpp"
#include "ispar/pipeline/artifacts.hpp"
#include "ispar/pipeline/config.hpp"
#include "ispar/pipeline/decision.hpp"
#include "ispar/pipeline/stages.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace ispar;
using namespace ispar::pipeline;

namespace {

const char* kTiny = R"({
  "seed": 3,
  "simulation": {"kinds": [
    {"kind": "healthy", "count": 2},
    {"kind": "internal-phase-ground", "count": 3},
    {"kind": "magnetizing-inrush", "count": 3}
  ]},
  "cv": {"folds": 2}
})";

fs::path freshDir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("ispar_pipeline_" + name);
  fs::remove_all(d);
  return d;
}

StageContext context(const PipelineConfig& cfg, const fs::path& root) {
  StageContext ctx;
  ctx.config = cfg;
  ctx.root = root.string();
  ctx.jobs = 2;
  return ctx;
}

struct Counters {
  int detector = 0, locator = 0, identifier = 0;
};

DecisionModels countingModels(Counters& c, int detectorAnswer, std::size_t n = 167) {
  DecisionModels m;
  m.windowLength = n;
  auto slot = [&](Task t, int* counter, int answer) {
    TaskModel tm;
    tm.task = t;
    tm.spec.mode = features::FeatureMode::Time;
    tm.schema = features::featureSchema(tm.spec, n);
    tm.classNames = taskClassNames(t);
    tm.dimension = tm.schema.size();
    tm.predict = [counter, answer](const Eigen::RowVectorXd&) {
      ++*counter;
      return answer;
    };
    return tm;
  };
  m.detector = slot(Task::Detect, &c.detector, detectorAnswer);
  m.locator = slot(Task::Locate, &c.locator, 1);
  m.identifier = slot(Task::Identify, &c.identifier, 2);
  return m;
}

detect::CaptureWindow window(std::size_t n = 167) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  detect::CaptureWindow w;
  w.startIndex = n;
  for (auto& ch : w.samples) {
    ch.resize(n);
    for (auto& v : ch) v = g(rng);
  }
  return w;
}

int runCli(const std::string& args) {
  const std::string cmd = std::string(ISPAR_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, ShippedConfigsParse) {
  for (const char* name : {"smoke.json", "desk.json"}) {
    const auto cfg = loadConfig(std::string(ISPAR_CONFIG_DIR) + "/" + name);
    EXPECT_NO_THROW(cfg.validate()) << name;
  }
}

TEST(Config, UnknownKeysAndBadValuesRejected) {
  EXPECT_THROW(parseConfig(R"({"seed": 1, "sead": 2})"), ConfigError);
  EXPECT_THROW(parseConfig(R"({"detector": {"alpha": 0.05, "cycle": 167}})"), ConfigError);
  EXPECT_THROW(parseConfig(R"({"detector": {"alpha": 1.5}})"), ConfigError);
  EXPECT_THROW(parseConfig(R"({"seed": "one"})"), ConfigError);
  EXPECT_THROW(parseConfig(R"({"models": {"grid": [{"kind": "svm"}]}})"), ConfigError);
  EXPECT_THROW(parseConfig(R"({"selection": {"method": "chi2"}})"), ConfigError);
  EXPECT_THROW(parseConfig("{not json"), ConfigError);
  try {
    parseConfig(R"({"features": {"time": {"arOrdr": 3}}})");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("features.time"), std::string::npos) << what;
    EXPECT_NE(what.find("arOrdr"), std::string::npos) << what;
  }
}

TEST(Config, HashIgnoresStageDirOnly) {
  auto a = parseConfig(kTiny);
  auto b = a;
  b.stageDir = "elsewhere";
  EXPECT_EQ(configHash(a), configHash(b));
  b.seed = 4;
  EXPECT_NE(configHash(a), configHash(b));
  EXPECT_EQ(canonicalJson(parseConfig(canonicalJson(a))), canonicalJson(a));
}

TEST(Config, StageKeysFollowUpstream) {
  const auto a = parseConfig(kTiny);
  auto b = a;
  b.detector.alpha = 0.1;
  EXPECT_EQ(stageKey(a, "simulate"), stageKey(b, "simulate"));
  for (const char* s : {"detect", "extract", "select", "train", "evaluate", "report"}) {
    EXPECT_NE(stageKey(a, s), stageKey(b, s)) << s;
  }
  auto c = a;
  c.evaluate.push_back(ml::ModelSpec{});
  EXPECT_EQ(stageKey(a, "train"), stageKey(c, "train"));
  EXPECT_NE(stageKey(a, "evaluate"), stageKey(c, "evaluate"));
}

TEST(Artifacts, CaptureRoundTrip) {
  std::vector<CaptureRecord> caps(3);
  for (std::size_t i = 0; i < caps.size(); ++i) {
    caps[i].recordId = 10 + i;
    caps[i].kind = sim::EventKind::Overexcitation;
    caps[i].window = window(32);
    caps[i].window.triggerPhase = static_cast<int>(i);
  }
  const auto bytes = encodeCaptures(caps, 32);
  EXPECT_EQ(bytes.substr(0, 8), "ISPARCP1");
  std::size_t n = 0;
  const auto back = decodeCaptures(bytes, &n);
  EXPECT_EQ(n, 32u);
  ASSERT_EQ(back.size(), 3u);
  EXPECT_EQ(back[2].recordId, 12u);
  EXPECT_EQ(back[2].window.triggerPhase, 2);
  EXPECT_EQ(back[1].window.samples, caps[1].window.samples);
  EXPECT_THROW(decodeCaptures(bytes.substr(0, bytes.size() - 1)), FormatError);
}

TEST(Decision, FaultBranchCallsLocatorOnly) {
  Counters c;
  const auto d = threeStageDecision(window(), countingModels(c, 1));
  EXPECT_TRUE(d.trip);
  EXPECT_EQ(d.unit, "exciting");
  EXPECT_EQ(d.label(), "trip:exciting");
  EXPECT_EQ(c.detector, 1);
  EXPECT_EQ(c.locator, 1);
  EXPECT_EQ(c.identifier, 0);
  EXPECT_EQ(d.locatorCalls, 1);
  EXPECT_EQ(d.identifierCalls, 0);
}

TEST(Decision, DisturbanceBranchCallsIdentifierOnly) {
  Counters c;
  const auto d = threeStageDecision(window(), countingModels(c, 0));
  EXPECT_FALSE(d.trip);
  EXPECT_EQ(d.disturbance, "overexcitation");
  EXPECT_EQ(d.label(), "no-trip:overexcitation");
  EXPECT_EQ(c.detector, 1);
  EXPECT_EQ(c.locator, 0);
  EXPECT_EQ(c.identifier, 1);
}

TEST(Decision, SchemaMismatchRejected) {
  Counters c;
  auto m = countingModels(c, 1);
  m.locator.schema.pop_back();
  m.locator.dimension = m.locator.schema.size();
  EXPECT_THROW(m.validate(), InvalidInput);
  EXPECT_THROW(threeStageDecision(window(), m), InvalidInput);
  auto n = countingModels(c, 1);
  EXPECT_THROW(threeStageDecision(window(100), n), InvalidInput);
  auto o = countingModels(c, 1);
  std::swap(o.detector, o.locator);
  EXPECT_THROW(o.validate(), InvalidInput);
}

TEST(Stages, MissingUpstreamRefused) {
  const auto root = freshDir("missing");
  const auto ctx = context(parseConfig(kTiny), root);
  EXPECT_THROW(runStage("detect", ctx), MissingArtifact);
  EXPECT_THROW(runStage("train", ctx), MissingArtifact);
}

TEST(Stages, StaleAndTamperedUpstreamRefused) {
  const auto root = freshDir("stale");
  const auto cfg = parseConfig(kTiny);
  const auto ctx = context(cfg, root);
  runStage("simulate", ctx);
  runStage("detect", ctx);
  EXPECT_TRUE(fs::exists(root / "detect" / "captures.bin"));
  EXPECT_EQ(readStageInfo(root.string(), "detect").key, stageKey(cfg, "detect"));

  auto changed = cfg;
  changed.detector.alpha = 0.2;
  try {
    runStage("extract", context(changed, root));
    FAIL() << "expected MissingArtifact";
  } catch (const MissingArtifact& e) {
    EXPECT_NE(std::string(e.what()).find("different config"), std::string::npos) << e.what();
  }

  runStage("extract", ctx);
  {
    std::ofstream out(root / "simulate" / "summary.txt", std::ios::app);
    out << "edited\n";
  }
  EXPECT_THROW(runStage("extract", ctx), MissingArtifact);
  EXPECT_THROW(requireUpstream(root.string(), cfg, "select"), MissingArtifact);
  fs::remove_all(root);
}

TEST(Stages, RerunIsByteIdentical) {
  const auto root = freshDir("rerun");
  const auto ctx = context(parseConfig(kTiny), root);
  runStage("simulate", ctx);
  runStage("detect", ctx);
  const auto first = io::readFile((root / "detect" / "captures.bin").string());
  runStage("detect", ctx);
  EXPECT_EQ(io::readFile((root / "detect" / "captures.bin").string()), first);
  fs::remove_all(root);
}

TEST(Stages, HealthyOnlyRunStopsAtExtract) {
  const auto root = freshDir("healthy");
  const auto cfg = parseConfig(R"({"simulation": {"kinds": [{"kind": "healthy", "count": 3}]}})");
  const auto ctx = context(cfg, root);
  runStage("simulate", ctx);
  runStage("detect", ctx);
  EXPECT_THROW(runStage("extract", ctx), MissingArtifact);
  fs::remove_all(root);
}

TEST(Stages, TaskSubsetsPartitionCaptures) {
  std::vector<CaptureRecord> caps(6);
  const sim::EventKind kinds[6] = {sim::EventKind::InternalTurnTurn, sim::EventKind::MagnetizingInrush,
                                   sim::EventKind::InternalPhaseGround, sim::EventKind::ExternalFaultCtSat,
                                   sim::EventKind::SympatheticInrush, sim::EventKind::Overexcitation};
  const sim::Unit units[6] = {sim::Unit::Series, sim::Unit::None, sim::Unit::Exciting,
                              sim::Unit::None, sim::Unit::None, sim::Unit::None};
  for (int i = 0; i < 6; ++i) {
    caps[i].kind = kinds[i];
    caps[i].unit = units[i];
  }
  const std::vector<std::size_t> kept{0, 1, 2, 3, 5};
  const auto d = taskSubset(Task::Detect, caps, kept);
  EXPECT_EQ(d.labels, (std::vector<int>{1, 0, 1, 0, 0}));
  const auto l = taskSubset(Task::Locate, caps, kept);
  EXPECT_EQ(l.rows, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(l.labels, (std::vector<int>{0, 1}));
  const auto i = taskSubset(Task::Identify, caps, kept);
  EXPECT_EQ(i.rows, (std::vector<std::size_t>{1, 3, 4}));
  EXPECT_EQ(i.labels, (std::vector<int>{0, 3, 2}));
}

#ifdef ISPAR_CLI
TEST(Cli, ExitCodes) {
  const auto root = freshDir("cli");
  fs::create_directories(root);
  const auto bad = (root / "bad.json").string();
  {
    std::ofstream(bad) << R"({"seed": 1, "unknown": true})";
  }
  EXPECT_EQ(runCli("simulate --config " + bad), 2);
  EXPECT_EQ(runCli("simulate --no-such-flag"), 2);
  const auto tiny = (root / "tiny.json").string();
  {
    std::ofstream(tiny) << kTiny;
  }
  EXPECT_EQ(runCli("train --config " + tiny + " --stage-dir " + (root / "run").string()), 3);
  EXPECT_EQ(runCli("simulate --quiet --config " + tiny + " --stage-dir " + (root / "run").string()), 0);
  EXPECT_EQ(runCli("decide --config " + tiny + " --stage-dir " + (root / "run").string() + " --record-id 0"), 3);
  fs::remove_all(root);
}
#endif
