#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ispar/ml/dataset.hpp"
#include "ispar/ml/decision_tree.hpp"
#include "ispar/ml/gradient_boosting.hpp"
#include "ispar/ml/knn.hpp"
#include "ispar/ml/mlp.hpp"
#include "ispar/ml/naive_bayes.hpp"
#include "ispar/ml/random_forest.hpp"

namespace ispar::ml {

enum class ModelKind { DT, RF, GB, KNN, GNB, MLP };

std::string toString(ModelKind k);
ModelKind parseModelKind(const std::string& s);

// A model kind plus its hyperparameters; only the block matching `kind` is
// used.
struct ModelSpec {
  ModelKind kind = ModelKind::GB;
  DtParams dt;
  RfParams rf;
  GbParams gb;
  KnnParams knn;
  GnbParams gnb;
  MlpParams mlp;

  void validate() const;
  // Stable one-line form, e.g. "gb(learningRate=0.1,nEstimators=100,maxDepth=3,minLeaf=1,subsample=1)".
  std::string describe() const;
};

class TrainedModel {
 public:
  using Impl = std::variant<DecisionTree, RandomForest, GradientBoosting, Knn, GaussianNB, Mlp>;

  TrainedModel(ModelSpec spec, std::uint64_t seed, int dimension, int classCount, Impl impl);

  const ModelSpec& spec() const { return spec_; }
  ModelKind kind() const { return spec_.kind; }
  std::uint64_t seed() const { return seed_; }
  int dimension() const { return dimension_; }
  int classCount() const { return classCount_; }
  const Impl& impl() const { return impl_; }

  int predict(const Eigen::RowVectorXd& x) const;
  std::vector<int> predict(const Eigen::MatrixXd& X) const;
  std::vector<double> proba(const Eigen::RowVectorXd& x) const;

 private:
  ModelSpec spec_;
  std::uint64_t seed_ = 0;
  int dimension_ = 0;
  int classCount_ = 0;
  Impl impl_;
};

// Fits `spec` on `ds`. The same (spec, data, seed) reproduces identical
// predictions; `jobs` only parallelizes random-forest trees.
TrainedModel train(const ModelSpec& spec, const Dataset& ds, std::uint64_t seed, int jobs = 1);

}  // namespace ispar::ml
