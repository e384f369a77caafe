#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "ispar/ml/dataset.hpp"

namespace ispar::ml {

enum class Metric { L1, L2 };

std::string toString(Metric m);
Metric parseMetric(const std::string& s);

struct KnnParams {
  int k = 5;
  Metric metric = Metric::L2;
  bool standardize = false;  // z-score columns with training statistics

  void validate() const;
};

class Knn {
 public:
  static Knn fit(const Dataset& ds, const KnnParams& params);

  // Neighbours ordered by distance then training index; the vote goes to the
  // most frequent class, ties to the lower class.
  std::vector<double> proba(const Eigen::RowVectorXd& x) const;
  int predict(const Eigen::RowVectorXd& x) const;
  std::vector<std::size_t> neighbours(const Eigen::RowVectorXd& x) const;

  const KnnParams& params() const { return params_; }

  void save(std::ostream& out) const;
  static Knn load(std::istream& in);

 private:
  Eigen::RowVectorXd transform(const Eigen::RowVectorXd& x) const;

  KnnParams params_;
  Eigen::MatrixXd X_;
  std::vector<int> y_;
  int classCount_ = 0;
  Eigen::RowVectorXd mean_, scale_;
};

}  // namespace ispar::ml
