#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <vector>

#include "ispar/ml/cart.hpp"
#include "ispar/ml/dataset.hpp"

namespace ispar::ml {

struct RfParams {
  int nTrees = 100;
  int maxDepth = 0;
  int minLeaf = 1;
  int maxFeatures = 0;  // per node; 0 = floor(sqrt(d)), values above d mean d
  bool bootstrap = true;

  void validate() const;
};

class RandomForest {
 public:
  // Tree t draws from deriveSeed(seed, t), so the forest does not depend on
  // `jobs`.
  static RandomForest fit(const Dataset& ds, const RfParams& params, std::uint64_t seed, int jobs = 1);

  // Fraction of trees voting for each class.
  std::vector<double> proba(const Eigen::RowVectorXd& x) const;
  // Majority vote; ties go to the lower class.
  int predict(const Eigen::RowVectorXd& x) const;

  // Mean over trees of the weighted gini decrease per feature, unnormalized.
  const std::vector<double>& rawImportance() const { return importance_; }
  // rawImportance scaled to sum to 1 (all zero when no tree split).
  std::vector<double> importance() const;

  const std::vector<Tree>& trees() const { return trees_; }
  int classCount() const { return classCount_; }

  void save(std::ostream& out) const;
  static RandomForest load(std::istream& in);

 private:
  std::vector<Tree> trees_;
  std::vector<double> importance_;
  int classCount_ = 0;
};

}  // namespace ispar::ml
