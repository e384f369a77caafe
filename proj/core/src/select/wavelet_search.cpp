#include "ispar/select/wavelet_search.hpp"

#include <algorithm>
#include <exception>
#include <optional>

#include "ispar/common/error.hpp"
#include "ispar/common/hash.hpp"
#include "ispar/common/parallel.hpp"
#include "ispar/eval/cross_validation.hpp"
#include "ispar/eval/metrics.hpp"
#include "ispar/features/dwt.hpp"
#include "ispar/features/feature_matrix.hpp"

namespace ispar::select {

std::vector<features::WaveletSpec> expandSpecs(const std::vector<std::string>& wavelets, std::size_t windowLength,
                                               const features::WaveletCatalog& catalog) {
  std::vector<features::WaveletSpec> out;
  for (const auto& w : wavelets) {
    const int maxLevel = features::maxUsefulLevel(windowLength, catalog.at(w).length());
    for (int l = 1; l <= maxLevel; ++l) out.push_back({w, l});
  }
  return out;
}

namespace {

struct Outcome {
  std::optional<WaveletScore> score;
  std::string error;
};

Outcome evaluateSpec(const std::vector<detect::CaptureWindow>& windows, const std::vector<int>& y, int classCount,
                     const features::WaveletSpec& spec, const std::vector<eval::TrainTestSplit>& splits,
                     const WaveletSearchConfig& cfg, const features::WaveletCatalog& catalog) {
  Outcome out;
  try {
    features::FeatureSpec fs;
    fs.mode = features::FeatureMode::Coeffs;
    fs.coeffs = spec;
    auto fm = features::extractFeatureMatrix(windows, fs, 1, catalog);
    if (fm.rows() != windows.size()) throw InvalidInput("non-finite coefficients in " + std::to_string(windows.size() - fm.rows()) + " windows");
    const auto ds = ml::Dataset::make(std::move(fm.values), y, std::move(fm.schema));
    WaveletScore s{spec, 0.0, {}};
    for (const auto& split : splits) {
      const auto train = ds.rows(split.train);
      const auto model = ml::DecisionTree::fit(ml::Dataset{train.X, train.y, train.schema, classCount, {}},
                                               cfg.tree);
      eval::Confusion c(classCount);
      for (auto i : split.test) c.at(y[i], model.predict(ds.X.row(static_cast<Eigen::Index>(i))))++;
      s.runScores.push_back(eval::balancedAccuracy(c));
    }
    double sum = 0.0;
    for (double v : s.runScores) sum += v;
    s.meanBalancedAccuracy = sum / static_cast<double>(s.runScores.size());
    out.score = std::move(s);
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace

WaveletSearchResult dtWaveletSearch(const std::vector<detect::CaptureWindow>& windows, const std::vector<int>& y,
                                    int classCount, const std::vector<features::WaveletSpec>& specs,
                                    const WaveletSearchConfig& cfg, const features::WaveletCatalog& catalog) {
  if (windows.size() != y.size()) throw InvalidInput("wavelet search: windows and labels differ in length");
  if (cfg.runs < 1) throw InvalidInput("wavelet search: runs must be >= 1");
  if (cfg.topK < 1) throw InvalidInput("wavelet search: topK must be >= 1");
  std::vector<eval::TrainTestSplit> splits;
  for (int r = 0; r < cfg.runs; ++r) {
    splits.push_back(eval::stratifiedSplit(y, classCount, cfg.testFraction,
                                           deriveSeed(cfg.seed, static_cast<std::uint64_t>(r))));
  }
  std::vector<Outcome> outcomes(specs.size());
  parallelFor(specs.size(), cfg.jobs, [&](std::size_t i) {
    outcomes[i] = evaluateSpec(windows, y, classCount, specs[i], splits, cfg, catalog);
  });

  WaveletSearchResult res;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (outcomes[i].score) {
      res.ranking.push_back(std::move(*outcomes[i].score));
    } else {
      res.skipped.push_back(specs[i].label() + ": " + outcomes[i].error);
    }
  }
  std::stable_sort(res.ranking.begin(), res.ranking.end(), [](const WaveletScore& a, const WaveletScore& b) {
    return a.meanBalancedAccuracy > b.meanBalancedAccuracy;
  });
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(cfg.topK), res.ranking.size());
  res.top.assign(res.ranking.begin(), res.ranking.begin() + static_cast<std::ptrdiff_t>(k));
  return res;
}

}  // namespace ispar::select
