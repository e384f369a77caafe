#include "ispar/pipeline/stages.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>

#include "ispar/common/binary_io.hpp"
#include "ispar/common/error.hpp"
#include "ispar/common/parallel.hpp"
#include "ispar/eval/grid_search.hpp"
#include "ispar/eval/report.hpp"
#include "ispar/eval/timing.hpp"
#include "ispar/features/feature_io.hpp"
#include "ispar/ml/model_io.hpp"
#include "ispar/pipeline/decision.hpp"
#include "ispar/select/rf_importance.hpp"
#include "ispar/select/selection_report.hpp"
#include "ispar/select/wavelet_search.hpp"
#include "ispar/sim/sweep.hpp"
#include "ispar/sim/waveform_store.hpp"
#include "json.hpp"

namespace ispar::pipeline {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void say(const StageContext& ctx, const std::string& line) {
  if (ctx.log) ctx.log(line);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Artifacts of one stage run; every file written through it is listed in
// stage.json.
class StageWriter {
 public:
  StageWriter(const StageContext& ctx, std::string stage) : ctx_(ctx), stage_(std::move(stage)) {
    requireUpstream(ctx.root, ctx.config, stage_);
    dir_ = stagePath(ctx.root, stage_);
    // A rerun starts from an empty directory so no stale file survives.
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    say(ctx_, "[" + stage_ + "] start");
  }

  const fs::path& dir() const { return dir_; }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void text(const std::string& name, const std::string& body) {
    io::writeFileAtomic(path(name), body);
    files_.push_back(name);
  }
  void list(const std::string& name) { files_.push_back(name); }

  void finish() {
    StageInfo info;
    info.stage = stage_;
    info.key = stageKey(ctx_.config, stage_);
    const auto up = upstreamOf(stage_);
    info.upstreamKey = up.empty() ? std::string{} : stageKey(ctx_.config, up);
    for (const auto& f : files_) info.files[f] = fileDigest(path(f));
    writeStageInfo(ctx_.root, info);
    io::writeFileAtomic((fs::path(ctx_.root) / "config.json").string(), canonicalJson(ctx_.config));
    writeRunManifest(ctx_.root, ctx_.config);
    say(ctx_, "[" + stage_ + "] done, " + std::to_string(files_.size()) + " artifacts");
  }

 private:
  const StageContext& ctx_;
  std::string stage_;
  fs::path dir_;
  std::vector<std::string> files_;
};

void writeLog(const StageContext& ctx, const std::string& name, const std::string& body) {
  fs::create_directories(logsPath(ctx.root));
  io::writeFileAtomic((fs::path(logsPath(ctx.root)) / name).string(), body);
}

sim::SimulationSetup setupFor(const PipelineConfig& cfg) {
  sim::SimulationSetup setup;
  setup.options.noise = cfg.simulation.noise;
  setup.options.noiseSnrDb = cfg.simulation.noiseSnrDb;
  return setup;
}

std::vector<CaptureRecord> loadCaptures(const StageContext& ctx, std::size_t* windowLength = nullptr) {
  return decodeCaptures(io::readFile((fs::path(stagePath(ctx.root, "detect")) / "captures.bin").string()),
                        windowLength);
}

struct Extracted {
  std::vector<CaptureRecord> captures;
  std::size_t windowLength = 0;
  features::FeatureMatrix time, energy;
};

Extracted loadExtracted(const StageContext& ctx) {
  Extracted e;
  e.captures = loadCaptures(ctx, &e.windowLength);
  const auto dir = fs::path(stagePath(ctx.root, "extract"));
  e.time = features::readFeatureMatrix((dir / "time.bin").string());
  e.energy = features::readFeatureMatrix((dir / "energy.bin").string());
  return e;
}

features::FeatureSpec timeBankSpec(const PipelineConfig& cfg) {
  features::FeatureSpec s;
  s.mode = features::FeatureMode::Time;
  s.families = {features::TimeFamily::F1, features::TimeFamily::F2, features::TimeFamily::F3, features::TimeFamily::F4,
                features::TimeFamily::F5, features::TimeFamily::F6, features::TimeFamily::F7};
  s.time = cfg.features.time;
  return s;
}

features::FeatureSpec energyPoolSpec(const PipelineConfig& cfg) {
  features::FeatureSpec s;
  s.mode = features::FeatureMode::EnergyPool;
  s.poolWavelets = cfg.features.poolWavelets;
  return s;
}

features::FeatureMatrix subsetRows(const features::FeatureMatrix& fm, const std::vector<std::size_t>& keep) {
  std::map<std::size_t, Eigen::Index> row;
  for (std::size_t i = 0; i < fm.kept.size(); ++i) row[fm.kept[i]] = static_cast<Eigen::Index>(i);
  features::FeatureMatrix out;
  out.schema = fm.schema;
  out.kept = keep;
  out.values.resize(static_cast<Eigen::Index>(keep.size()), fm.values.cols());
  for (std::size_t i = 0; i < keep.size(); ++i) out.values.row(static_cast<Eigen::Index>(i)) = fm.values.row(row.at(keep[i]));
  return out;
}

std::string classSummary(const std::vector<int>& y, const std::vector<std::string>& names) {
  std::vector<std::size_t> counts(names.size(), 0);
  for (int v : y) ++counts[static_cast<std::size_t>(v)];
  std::string s;
  for (std::size_t c = 0; c < names.size(); ++c) s += (c ? ", " : "") + names[c] + "=" + std::to_string(counts[c]);
  return s;
}

void requireTwoClasses(Task task, const std::vector<int>& y, const std::string& stage) {
  const auto names = taskClassNames(task);
  std::vector<bool> seen(names.size(), false);
  for (int v : y) seen[static_cast<std::size_t>(v)] = true;
  if (std::count(seen.begin(), seen.end(), true) < 2) {
    throw InvalidInput(stage + ": task '" + toString(task) + "' needs captures of at least two classes (" +
                       classSummary(y, names) + ")");
  }
}

// ---- stages ----

void simulateStage(const StageContext& ctx) {
  StageWriter w(ctx, "simulate");
  const auto& cfg = ctx.config;
  sim::SweepConfig sc;
  sc.kinds = cfg.simulation.kinds;
  sc.seed = sweepSeed(cfg);
  std::size_t lastDecile = 0;
  const auto summary = sim::runSweep(sc, setupFor(cfg), w.dir().string(), ctx.jobs, [&](std::size_t done, std::size_t total) {
    const auto decile = total ? done * 10 / total : 10;
    if (decile != lastDecile) {
      lastDecile = decile;
      say(ctx, "[simulate] " + std::to_string(done) + "/" + std::to_string(total));
    }
  });
  w.list(std::string(sim::kManifestName));
  for (const auto& e : summary.entries) w.list(e.file);
  std::ostringstream s;
  s << "records: " << summary.entries.size() << '\n';
  for (const auto& [k, n] : summary.classCounts) s << k << ": " << n << '\n';
  w.text("summary.txt", s.str());
  w.finish();
}

void detectStage(const StageContext& ctx) {
  StageWriter w(ctx, "detect");
  const auto& cfg = ctx.config;
  const auto simDir = fs::path(stagePath(ctx.root, "simulate"));
  const auto entries = sim::readManifest((simDir / sim::kManifestName).string());
  std::vector<std::optional<CaptureRecord>> found(entries.size());
  parallelFor(entries.size(), ctx.jobs, [&](std::size_t i) {
    const auto rec = sim::readWaveform((simDir / entries[i].file).string());
    if (auto cap = detect::detectAndCapture(rec, cfg.detector)) {
      found[i] = CaptureRecord{entries[i].id, rec.label, rec.unitLabel, std::move(*cap)};
    }
  });
  std::vector<CaptureRecord> captures;
  std::map<std::string, std::pair<std::size_t, std::size_t>> perKind;  // records, captured
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto& slot = perKind[std::string(sim::toString(entries[i].spec.kind))];
    ++slot.first;
    if (found[i]) {
      ++slot.second;
      captures.push_back(std::move(*found[i]));
    }
  }
  w.text("captures.bin", encodeCaptures(captures, static_cast<std::size_t>(cfg.detector.cycleSamples)));
  std::ostringstream s;
  s << "records: " << entries.size() << "\ncaptures: " << captures.size() << '\n';
  for (const auto& [k, v] : perKind) s << k << ": " << v.second << "/" << v.first << " captured\n";
  w.text("summary.txt", s.str());
  if (captures.empty()) say(ctx, "[detect] warning: no record triggered the event detector");
  w.finish();
}

void extractStage(const StageContext& ctx) {
  const auto& cfg = ctx.config;
  requireUpstream(ctx.root, cfg, "extract");
  const auto captures = loadCaptures(ctx);
  if (captures.empty()) {
    throw MissingArtifact("detect", "the detect stage produced an empty capture set (no record triggered the event "
                                    "detector); there is nothing to extract. Add event kinds or lower detector.alpha, "
                                    "then rerun `ispar detect`");
  }
  StageWriter w(ctx, "extract");
  std::vector<detect::CaptureWindow> windows;
  windows.reserve(captures.size());
  for (const auto& c : captures) windows.push_back(c.window);
  const auto tm = features::extractFeatureMatrix(windows, timeBankSpec(cfg), ctx.jobs);
  const auto pm = features::extractFeatureMatrix(windows, energyPoolSpec(cfg), ctx.jobs);
  std::vector<std::size_t> keep;
  std::set_intersection(tm.kept.begin(), tm.kept.end(), pm.kept.begin(), pm.kept.end(), std::back_inserter(keep));
  if (keep.empty()) throw InvalidInput("extract: every capture produced a non-finite feature");
  const auto t = subsetRows(tm, keep), e = subsetRows(pm, keep);
  io::writeFileAtomic(w.path("time.bin"), features::encodeFeatureMatrix(t));
  w.list("time.bin");
  io::writeFileAtomic(w.path("energy.bin"), features::encodeFeatureMatrix(e));
  w.list("energy.bin");
  std::ostringstream s;
  s << "captures: " << captures.size() << "\nrows: " << keep.size() << "\ntime columns: " << t.cols()
    << "\nenergy columns: " << e.cols() << '\n';
  for (const auto& d : tm.diagnostics) s << "time: " << d << '\n';
  for (const auto& d : pm.diagnostics) s << "energy: " << d << '\n';
  w.text("summary.txt", s.str());
  w.finish();
}

void selectStage(const StageContext& ctx) {
  StageWriter w(ctx, "select");
  const auto& cfg = ctx.config;
  const auto ex = loadExtracted(ctx);
  json chosen = json::object();
  for (auto task : kTasks) {
    const auto sub = taskSubset(task, ex.captures, ex.energy.kept);
    const auto name = toString(task);
    json names = json::array();
    if (cfg.features.mode == "combined") {
      if (sub.rows.size() < 2) throw InvalidInput("select: task '" + name + "' has fewer than two captures");
      requireTwoClasses(task, sub.labels, "select");
      Eigen::MatrixXd X(static_cast<Eigen::Index>(sub.rows.size()), ex.energy.values.cols());
      for (std::size_t i = 0; i < sub.rows.size(); ++i) {
        X.row(static_cast<Eigen::Index>(i)) = ex.energy.values.row(static_cast<Eigen::Index>(sub.rows[i]));
      }
      const int count = std::min<int>(cfg.selection.count, static_cast<int>(X.cols()));
      select::SelectionResult res;
      select::ReportParams params{{"task", name}, {"count", std::to_string(count)}, {"rows", std::to_string(X.rows())}};
      if (cfg.selection.method == "mrmr") {
        res = select::mrmrSelect(X, sub.labels, count, cfg.selection.bins, ctx.jobs);
        params.emplace_back("bins", std::to_string(cfg.selection.bins));
      } else {
        const auto ds = ml::Dataset::make(X, sub.labels, ex.energy.schema, taskClassNames(task));
        res = select::rfImportance(ds, ml::RfParams{}, selectionSeed(cfg), ctx.jobs);
        res.chosen.resize(static_cast<std::size_t>(count));
        res.stepScores.resize(static_cast<std::size_t>(count));
        params.emplace_back("seed", std::to_string(selectionSeed(cfg)));
      }
      for (auto j : res.chosen) names.push_back(ex.energy.schema[j]);
      w.text(name + ".txt", select::selectionReport(res, ex.energy.schema, params));
    }
    chosen[name] = names;
  }
  w.text("selection.json", json{{"mode", cfg.features.mode}, {"energies", chosen}}.dump(2) + "\n");

  if (cfg.selection.waveletSearch.enabled) {
    std::vector<detect::CaptureWindow> windows;
    const auto sub = taskSubset(Task::Detect, ex.captures, ex.energy.kept);
    for (auto r : sub.rows) windows.push_back(ex.captures[ex.energy.kept[r]].window);
    select::WaveletSearchConfig wc;
    wc.runs = cfg.selection.waveletSearch.runs;
    wc.seed = selectionSeed(cfg);
    wc.jobs = ctx.jobs;
    const auto specs = select::expandSpecs(cfg.selection.waveletSearch.wavelets, ex.windowLength);
    const auto res = select::dtWaveletSearch(windows, sub.labels, 2, specs, wc);
    w.text("wavelet_search.txt",
           select::waveletSearchReport(res, {{"task", "detect"}, {"runs", std::to_string(wc.runs)}, {"test_fraction", "0.2"}}));
  }
  w.finish();
}

void trainStage(const StageContext& ctx) {
  StageWriter w(ctx, "train");
  const auto& cfg = ctx.config;
  for (auto task : kTasks) {
    const auto name = toString(task);
    auto td = loadTaskData(ctx, task);
    say(ctx, "[train] " + name + ": " + std::to_string(td.data.size()) + " rows, " +
                 std::to_string(td.data.dimension()) + " features, " + classSummary(td.data.y, td.data.classNames));
    const eval::CVPlan plan{cfg.folds, true, cvSeed(cfg)};
    const auto gr = eval::gridSearch(td.data, cfg.grid, plan, modelSeed(cfg), ctx.jobs);
    std::ostringstream g;
    g << "task: " << name << "\nfolds: " << cfg.folds << '\n';
    for (std::size_t i = 0; i < gr.cells.size(); ++i) {
      const auto& c = gr.cells[i];
      g << (i == gr.best ? "* " : "  ") << i << ' ' << c.spec.describe();
      if (c.failed) g << " failed: " << c.error << '\n';
      else g << " mean=" << num(c.cv.mean) << " std=" << num(c.cv.stddev) << '\n';
    }
    w.text("grid_" + name + ".txt", g.str());
    const auto& best = gr.bestCell();
    const auto model = ml::train(best.spec, td.data, modelSeed(cfg), ctx.jobs);
    const std::string modelFile = "model_" + name + ".bin";
    ml::saveModel(w.path(modelFile), model);
    w.list(modelFile);
    w.list(modelFile + ".txt");
    const json desc{{"task", name},
                    {"model", modelFile},
                    {"spec", best.spec.describe()},
                    {"cvMean", best.cv.mean},
                    {"rows", td.data.size()},
                    {"windowLength", static_cast<std::size_t>(cfg.detector.cycleSamples)},
                    {"classNames", td.data.classNames},
                    {"schema", td.data.schema},
                    {"featureSpec", json::parse(featureSpecToJson(td.spec))}};
    w.text("task_" + name + ".json", desc.dump(2) + "\n");
  }
  w.finish();
}

void evaluateStage(const StageContext& ctx) {
  StageWriter w(ctx, "evaluate");
  const auto& cfg = ctx.config;
  json index = json::array();
  for (auto task : kTasks) {
    const auto name = toString(task);
    const auto td = loadTaskData(ctx, task);
    const eval::CVPlan plan{cfg.folds, true, cvSeed(cfg)};
    for (std::size_t i = 0; i < cfg.evaluate.size(); ++i) {
      const auto& spec = cfg.evaluate[i];
      const auto cv = eval::crossValidate(spec, td.data, plan, modelSeed(cfg), ctx.jobs);
      const auto rep = eval::makeReport(name, spec.describe(), td.data.classNames, cv);
      const auto file = name + "_" + std::to_string(i) + "_" + ml::toString(spec.kind) + ".json";
      w.text(file, eval::toJson(rep));
      index.push_back(file);
      say(ctx, "[evaluate] " + name + " " + ml::toString(spec.kind) + " balanced accuracy " + num(rep.balancedAccuracy));
    }
  }
  w.text("index.json", index.dump(2) + "\n");
  w.finish();
}

void reportStage(const StageContext& ctx) {
  StageWriter w(ctx, "report");
  const auto& cfg = ctx.config;
  const auto evalDir = fs::path(stagePath(ctx.root, "evaluate"));
  const auto index = json::parse(io::readFile((evalDir / "index.json").string()));
  std::vector<eval::EvalReport> reports;
  for (const auto& f : index) reports.push_back(eval::evalReportFromJson(io::readFile((evalDir / f.get<std::string>()).string())));
  for (auto task : kTasks) {
    std::string body;
    for (const auto& r : reports) {
      if (r.task == toString(task)) body += eval::confusionTable(r) + "\n";
    }
    w.text(toString(task) + ".txt", body);
  }
  w.text("comparison.txt", eval::comparisonTable(reports));
  w.text("reports.csv", eval::toCsv(reports));

  // Wall-clock measurements live in logs/ only.
  const auto ex = loadExtracted(ctx);
  std::vector<std::pair<std::string, eval::TimingBlock>> rows;
  for (auto task : kTasks) {
    const auto td = loadTaskData(ctx, task);
    const auto split = eval::stratifiedSplit(td.data.y, td.data.classCount, 0.2, cvSeed(cfg));
    const auto train = td.data.rows(split.train), test = td.data.rows(split.test);
    std::size_t next = 0;
    auto extractOne = [&] {
      const auto& win = ex.captures[td.captureIndex[split.test[next++ % split.test.size()]]].window;
      (void)features::extractFeatures(win, td.spec);
    };
    for (const auto& spec : cfg.evaluate) {
      rows.emplace_back(toString(task) + "/" + ml::toString(spec.kind),
                        eval::timingReport(spec, train, test, modelSeed(cfg), cfg.timingRuns, extractOne));
    }
  }
  std::string timing = eval::timingTable(rows);

  const auto models = loadDecisionModels(ctx.root);
  const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(cfg.timingRuns), ex.energy.kept.size());
  std::vector<double> ms;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& win = ex.captures[ex.energy.kept[i]].window;
    const auto t0 = std::chrono::steady_clock::now();
    (void)threeStageDecision(win, models);
    ms.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  double mean = 0.0, var = 0.0;
  for (double v : ms) mean += v;
  mean /= static_cast<double>(std::max<std::size_t>(ms.size(), 1));
  for (double v : ms) var += (v - mean) * (v - mean);
  const double sd = ms.size() > 1 ? std::sqrt(var / static_cast<double>(ms.size() - 1)) : 0.0;
  timing += "\ndecision latency per window (extract + predicts): mean " + num(mean) + " ms, std " + num(sd) +
            " ms over " + std::to_string(ms.size()) + " windows\n";
  writeLog(ctx, "timing.txt", timing);
  say(ctx, "[report] decision latency " + num(mean) + " ms per window");
  w.finish();
}

}  // namespace

TaskSubset taskSubset(Task task, const std::vector<CaptureRecord>& captures, const std::vector<std::size_t>& kept) {
  TaskSubset s;
  for (std::size_t r = 0; r < kept.size(); ++r) {
    const auto& c = captures.at(kept[r]);
    std::optional<int> label;
    switch (task) {
      case Task::Detect:
        label = sim::isInternalFault(c.kind) ? 1 : 0;
        break;
      case Task::Locate:
        if (sim::isInternalFault(c.kind)) label = c.unit == sim::Unit::Exciting ? 1 : 0;
        break;
      case Task::Identify:
        label = sim::disturbanceClass(c.kind);
        break;
    }
    if (label) {
      s.rows.push_back(r);
      s.labels.push_back(*label);
    }
  }
  return s;
}

TaskData loadTaskData(const StageContext& ctx, Task task) {
  const auto& cfg = ctx.config;
  const auto ex = loadExtracted(ctx);
  const auto sel = json::parse(io::readFile((fs::path(stagePath(ctx.root, "select")) / "selection.json").string()));
  TaskData td;
  td.spec.families = cfg.features.taskFamilies[static_cast<std::size_t>(task)];
  td.spec.time = cfg.features.time;
  if (cfg.features.mode == "time") {
    td.spec.mode = features::FeatureMode::Time;
  } else {
    td.spec.mode = features::FeatureMode::Combined;
    for (const auto& n : sel.at("energies").at(toString(task))) {
      td.spec.energies.push_back(features::EnergyTerm::parse(n.get<std::string>()));
    }
  }
  const auto schema = features::featureSchema(td.spec, ex.windowLength);
  std::map<std::string, std::pair<const features::FeatureMatrix*, Eigen::Index>> where;
  for (std::size_t j = 0; j < ex.time.schema.size(); ++j) where[ex.time.schema[j]] = {&ex.time, static_cast<Eigen::Index>(j)};
  for (std::size_t j = 0; j < ex.energy.schema.size(); ++j) {
    where[ex.energy.schema[j]] = {&ex.energy, static_cast<Eigen::Index>(j)};
  }
  const auto sub = taskSubset(task, ex.captures, ex.energy.kept);
  if (sub.rows.size() < 2) throw InvalidInput("task '" + toString(task) + "' has fewer than two captures");
  requireTwoClasses(task, sub.labels, toString(task));
  Eigen::MatrixXd X(static_cast<Eigen::Index>(sub.rows.size()), static_cast<Eigen::Index>(schema.size()));
  for (std::size_t c = 0; c < schema.size(); ++c) {
    const auto it = where.find(schema[c]);
    if (it == where.end()) throw MissingArtifact("extract", "feature '" + schema[c] + "' was not extracted; rerun `ispar extract`");
    for (std::size_t i = 0; i < sub.rows.size(); ++i) {
      X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          it->second.first->values(static_cast<Eigen::Index>(sub.rows[i]), it->second.second);
    }
  }
  for (auto r : sub.rows) td.captureIndex.push_back(ex.energy.kept[r]);
  td.data = ml::Dataset::make(std::move(X), sub.labels, schema, taskClassNames(task));
  return td;
}

void runStage(const std::string& stage, const StageContext& ctx) {
  if (stage == "simulate") simulateStage(ctx);
  else if (stage == "detect") detectStage(ctx);
  else if (stage == "extract") extractStage(ctx);
  else if (stage == "select") selectStage(ctx);
  else if (stage == "train") trainStage(ctx);
  else if (stage == "evaluate") evaluateStage(ctx);
  else if (stage == "report") reportStage(ctx);
  else throw ConfigError("unknown stage '" + stage + "'");
}

void runAll(const StageContext& ctx) {
  for (const auto& s : stageOrder()) runStage(s, ctx);
}

}  // namespace ispar::pipeline
