#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "ispar/ml/dataset.hpp"

namespace ispar::ml {

struct GnbParams {
  double varianceFloor = 1e-9;  // times the mean per-feature variance of the training set

  void validate() const;
};

class GaussianNB {
 public:
  static GaussianNB fit(const Dataset& ds, const GnbParams& params = {});

  std::vector<double> logPosterior(const Eigen::RowVectorXd& x) const;  // unnormalized
  std::vector<double> proba(const Eigen::RowVectorXd& x) const;
  int predict(const Eigen::RowVectorXd& x) const;

  const Eigen::MatrixXd& means() const { return mean_; }
  const Eigen::MatrixXd& variances() const { return var_; }
  // Notes from fitting, e.g. a class with a single sample.
  const std::vector<std::string>& flags() const { return flags_; }

  void save(std::ostream& out) const;
  static GaussianNB load(std::istream& in);

 private:
  Eigen::MatrixXd mean_, var_;  // class x feature
  std::vector<double> logPrior_;
  std::vector<std::string> flags_;
};

}  // namespace ispar::ml
