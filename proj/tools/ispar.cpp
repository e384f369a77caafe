// ispar: command-line driver for the pipeline stages.
//
// Exit codes: 0 success, 2 config or usage error, 3 missing or stale
// upstream artifact, 4 runtime failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ispar/common/error.hpp"
#include "ispar/common/parallel.hpp"
#include "ispar/detect/event_detector.hpp"
#include "ispar/pipeline/artifacts.hpp"
#include "ispar/pipeline/decision.hpp"
#include "ispar/pipeline/stages.hpp"
#include "ispar/sim/sweep.hpp"
#include "ispar/sim/waveform_store.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitMissing = 3;
constexpr int kExitRuntime = 4;

struct Options {
  std::string config;
  std::string stageDir;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  bool quiet = false;
  std::string record;
  std::optional<std::size_t> recordId;
};

ispar::pipeline::StageContext makeContext(const Options& o) {
  if (o.config.empty()) throw ispar::ConfigError("--config is required");
  ispar::pipeline::StageContext ctx;
  ctx.config = ispar::pipeline::loadConfig(o.config);
  if (o.seed) ctx.config.seed = *o.seed;
  if (!o.stageDir.empty()) ctx.config.stageDir = o.stageDir;
  ctx.root = ctx.config.stageDir;
  ctx.jobs = o.jobs;
  if (!o.quiet) ctx.log = [](const std::string& line) { std::cerr << line << '\n'; };
  return ctx;
}

int decide(const Options& o) {
  namespace fs = std::filesystem;
  std::string root = o.stageDir;
  ispar::detect::EDConfig ed;
  if (!o.config.empty()) {
    const auto cfg = ispar::pipeline::loadConfig(o.config);
    ed = cfg.detector;
    if (root.empty()) root = cfg.stageDir;
  }
  if (root.empty()) throw ispar::ConfigError("decide needs --stage-dir or --config");
  std::string path = o.record;
  if (o.recordId) {
    const auto simDir = fs::path(ispar::pipeline::stagePath(root, "simulate"));
    const auto manifest = simDir / ispar::sim::kManifestName;
    if (!fs::exists(manifest)) throw ispar::MissingArtifact("simulate", "no simulated records in " + root + "; run `ispar simulate` first");
    for (const auto& e : ispar::sim::readManifest(manifest.string())) {
      if (e.id == *o.recordId) path = (simDir / e.file).string();
    }
    if (path.empty()) throw ispar::ConfigError("record id " + std::to_string(*o.recordId) + " is not in the manifest");
  }
  if (path.empty()) throw ispar::ConfigError("decide needs --record or --record-id");

  const auto models = ispar::pipeline::loadDecisionModels(root);
  const auto rec = ispar::sim::readWaveform(path);
  std::cout << "record: " << path << "\ntruth: " << ispar::sim::toString(rec.label);
  if (rec.unitLabel != ispar::sim::Unit::None) std::cout << " (" << ispar::sim::toString(rec.unitLabel) << ")";
  std::cout << '\n';
  ed.cycleSamples = static_cast<int>(models.windowLength);
  const auto cap = ispar::detect::detectAndCapture(rec, ed);
  if (!cap) {
    std::cout << "decision: no-event (detector did not trigger)\n";
    return 0;
  }
  const auto t0 = std::chrono::steady_clock::now();
  const auto d = ispar::pipeline::threeStageDecision(*cap, models);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "trigger sample: " << cap->startIndex << "\ndecision: " << d.label() << '\n';
  std::fprintf(stderr, "decision latency: %.3f ms\n", ms);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ispar: transient simulation, event detection and fault classification for ISPAR protection"};
  app.require_subcommand(1);
  Options o;
  o.jobs = ispar::hardwareJobs();

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Pipeline config (JSON)");
    sub->add_option("--stage-dir", o.stageDir, "Directory holding the stage artifacts (overrides the config)");
    sub->add_option("--seed", o.seed, "Global seed (overrides the config)");
    sub->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--quiet", o.quiet, "No progress lines");
  };

  std::string stage;
  for (const auto& s : ispar::pipeline::stageOrder()) {
    auto* sub = app.add_subcommand(s, "Run the " + s + " stage");
    common(sub);
    sub->callback([&stage, s] { stage = s; });
  }
  auto* all = app.add_subcommand("run", "Run every stage in order");
  common(all);
  all->callback([&stage] { stage = "run"; });
  auto* dec = app.add_subcommand("decide", "Classify one waveform record with the trained models");
  common(dec);
  dec->add_option("--record", o.record, "Waveform file (ISPARWF1)");
  dec->add_option("--record-id", o.recordId, "Record id from the simulate stage manifest");
  dec->callback([&stage] { stage = "decide"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (stage == "decide") return decide(o);
    const auto ctx = makeContext(o);
    if (stage == "run") ispar::pipeline::runAll(ctx);
    else ispar::pipeline::runStage(stage, ctx);
    return 0;
  } catch (const ispar::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ispar::MissingArtifact& e) {
    std::cerr << "missing upstream artifact (" << e.stage() << "): " << e.what() << '\n';
    return kExitMissing;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
