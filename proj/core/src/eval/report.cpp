#include "ispar/eval/report.hpp"

#include <algorithm>
#include <cstdio>
#include <json.hpp>

#include "ispar/common/error.hpp"

namespace ispar::eval {

namespace {

using nlohmann::json;

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(const std::string& s, std::size_t w, bool left = false) {
  if (s.size() >= w) return s;
  return left ? s + std::string(w - s.size(), ' ') : std::string(w - s.size(), ' ') + s;
}

std::vector<std::string> namesFor(const EvalReport& r) {
  if (!r.classNames.empty()) return r.classNames;
  std::vector<std::string> n;
  for (int c = 0; c < r.confusion.classCount; ++c) n.push_back("class" + std::to_string(c));
  return n;
}

}  // namespace

EvalReport makeReport(const std::string& task, const std::string& model, std::vector<std::string> classNames,
                      const CvResult& cv) {
  EvalReport r = makeReport(task, model, std::move(classNames), cv.pooled);
  r.foldScores = cv.foldScores;
  r.foldStd = cv.stddev;
  return r;
}

EvalReport makeReport(const std::string& task, const std::string& model, std::vector<std::string> classNames,
                      const Confusion& confusion) {
  if (!classNames.empty() && classNames.size() != static_cast<std::size_t>(confusion.classCount)) {
    throw InvalidInput("report: class names do not match the confusion matrix");
  }
  EvalReport r;
  r.task = task;
  r.model = model;
  r.classNames = std::move(classNames);
  r.confusion = confusion;
  r.perClassRecall = perClassRecall(confusion);
  r.balancedAccuracy = balancedAccuracy(confusion);
  return r;
}

std::string toJson(const EvalReport& r) {
  json j;
  j["task"] = r.task;
  j["model"] = r.model;
  j["classNames"] = r.classNames;
  j["classCount"] = r.confusion.classCount;
  j["confusion"] = r.confusion.counts;
  j["balancedAccuracy"] = r.balancedAccuracy;
  j["perClassRecall"] = r.perClassRecall;
  j["foldScores"] = r.foldScores;
  j["foldStd"] = r.foldStd;
  if (r.timing) {
    const auto& t = *r.timing;
    j["timing"] = {{"trainSeconds", t.trainSeconds},         {"testOneMeanSeconds", t.testOneMeanSeconds},
                   {"testOneStdSeconds", t.testOneStdSeconds}, {"testAllSeconds", t.testAllSeconds},
                   {"featureExtractSeconds", t.featureExtractSeconds}, {"testInstances", t.testInstances},
                   {"runs", t.runs}};
  }
  return j.dump(2) + "\n";
}

EvalReport evalReportFromJson(const std::string& text) {
  try {
    const auto j = json::parse(text);
    EvalReport r;
    r.task = j.at("task").get<std::string>();
    r.model = j.at("model").get<std::string>();
    r.classNames = j.at("classNames").get<std::vector<std::string>>();
    r.confusion = Confusion(j.at("classCount").get<int>());
    r.confusion.counts = j.at("confusion").get<std::vector<std::size_t>>();
    if (r.confusion.counts.size() != static_cast<std::size_t>(r.confusion.classCount * r.confusion.classCount)) {
      throw FormatError("report: confusion size mismatch");
    }
    r.balancedAccuracy = j.at("balancedAccuracy").get<double>();
    r.perClassRecall = j.at("perClassRecall").get<std::vector<double>>();
    r.foldScores = j.at("foldScores").get<std::vector<double>>();
    r.foldStd = j.at("foldStd").get<double>();
    if (j.contains("timing")) {
      const auto& t = j["timing"];
      TimingBlock b;
      b.trainSeconds = t.at("trainSeconds").get<double>();
      b.testOneMeanSeconds = t.at("testOneMeanSeconds").get<double>();
      b.testOneStdSeconds = t.at("testOneStdSeconds").get<double>();
      b.testAllSeconds = t.at("testAllSeconds").get<double>();
      b.featureExtractSeconds = t.at("featureExtractSeconds").get<double>();
      b.testInstances = t.at("testInstances").get<std::size_t>();
      b.runs = t.at("runs").get<int>();
      r.timing = b;
    }
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("report: ") + e.what());
  }
}

std::string confusionTable(const EvalReport& r) {
  const auto names = namesFor(r);
  std::size_t w = 12;
  for (const auto& n : names) w = std::max(w, n.size() + 2);
  std::string out = "task: " + r.task + "\nmodel: " + r.model + "\n";
  out += pad("actual \\ predicted", w + 8, true);
  for (const auto& n : names) out += pad(n, w);
  out += pad("recall", 10) + "\n";
  for (int t = 0; t < r.confusion.classCount; ++t) {
    out += pad(names[static_cast<std::size_t>(t)], w + 8, true);
    for (int p = 0; p < r.confusion.classCount; ++p) out += pad(std::to_string(r.confusion.at(t, p)), w);
    out += pad(pct(r.perClassRecall[static_cast<std::size_t>(t)]), 10) + "\n";
  }
  out += "balanced accuracy: " + pct(r.balancedAccuracy);
  if (!r.foldScores.empty()) out += " (" + std::to_string(r.foldScores.size()) + " folds, std " + pct(r.foldStd) + ")";
  return out + "\n";
}

std::string comparisonTable(const std::vector<EvalReport>& reports) {
  std::size_t wt = 6, wm = 10;
  for (const auto& r : reports) {
    wt = std::max(wt, r.task.size() + 2);
    wm = std::max(wm, r.model.size() + 2);
  }
  std::string out = pad("task", wt, true) + pad("model", wm, true) + pad("balanced acc", 14) + pad("fold std", 10) + "\n";
  for (const auto& r : reports) {
    out += pad(r.task, wt, true) + pad(r.model, wm, true) + pad(pct(r.balancedAccuracy), 14) + pad(pct(r.foldStd), 10) + "\n";
  }
  return out;
}

std::string timingTable(const std::vector<std::pair<std::string, TimingBlock>>& rows) {
  std::size_t w = 12;
  for (const auto& [name, t] : rows) w = std::max(w, name.size() + 2);
  std::string out = pad("classifier", w, true) + pad("training (s)", 14) + pad("testing one (ms)", 18) +
                    pad("testing all (s)", 17) + pad("feature extract (ms)", 22) + "\n";
  for (const auto& [name, t] : rows) {
    out += pad(name, w, true) + pad(fixed(t.trainSeconds, 4), 14) + pad(fixed(1e3 * t.testOneMeanSeconds, 4), 18) +
           pad(fixed(t.testAllSeconds, 4), 17) + pad(fixed(1e3 * t.featureExtractSeconds, 4), 22) + "\n";
  }
  return out;
}

std::string toCsv(const std::vector<EvalReport>& reports) {
  std::string out = "task,model,class,support,tp,fn,fp,tn,recall,balanced_accuracy\n";
  char buf[64];
  for (const auto& r : reports) {
    const auto names = namesFor(r);
    for (int c = 0; c < r.confusion.classCount; ++c) {
      out += r.task + ",\"" + r.model + "\"," + names[static_cast<std::size_t>(c)] + "," +
             std::to_string(r.confusion.support(c)) + "," + std::to_string(r.confusion.tp(c)) + "," +
             std::to_string(r.confusion.fn(c)) + "," + std::to_string(r.confusion.fp(c)) + "," +
             std::to_string(r.confusion.tn(c));
      std::snprintf(buf, sizeof buf, ",%.6f,%.6f\n", r.perClassRecall[static_cast<std::size_t>(c)], r.balancedAccuracy);
      out += buf;
    }
  }
  return out;
}

}  // namespace ispar::eval
