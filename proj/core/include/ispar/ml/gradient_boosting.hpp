#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <vector>

#include "ispar/ml/cart.hpp"
#include "ispar/ml/dataset.hpp"

namespace ispar::ml {

struct GbParams {
  double learningRate = 0.1;
  int nEstimators = 100;
  int maxDepth = 3;
  int minLeaf = 1;
  double subsample = 1.0;  // row fraction drawn without replacement per round

  void validate() const;
};

// Multinomial deviance boosting: one regression tree per class per round,
// fitted to y_k - p_k with Newton leaf values (K-1)/K * sum r / sum |r|(1-|r|).
// Each round's step is halved until the training deviance does not rise
// (down to zero), so the recorded deviance never increases.
class GradientBoosting {
 public:
  static GradientBoosting fit(const Dataset& ds, const GbParams& params, std::uint64_t seed);

  std::vector<double> scores(const Eigen::RowVectorXd& x) const;
  std::vector<double> proba(const Eigen::RowVectorXd& x) const;
  int predict(const Eigen::RowVectorXd& x) const;

  // Mean training deviance: entry 0 is the prior model, entry m after round m.
  const std::vector<double>& deviance() const { return deviance_; }
  const std::vector<double>& stepScales() const { return scales_; }
  int classCount() const { return static_cast<int>(init_.size()); }
  std::size_t rounds() const { return rounds_.size(); }

  void save(std::ostream& out) const;
  static GradientBoosting load(std::istream& in);

 private:
  double learningRate_ = 0.1;
  std::vector<double> init_;                // log class priors
  std::vector<std::vector<Tree>> rounds_;   // [round][class]
  std::vector<double> scales_;              // accepted step fraction per round
  std::vector<double> deviance_;
};

}  // namespace ispar::ml
