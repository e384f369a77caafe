#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "ispar/ml/dataset.hpp"

namespace ispar::ml {

enum class Activation { Relu, Tanh, Logistic };
enum class LrSchedule { Constant, InvScaling };  // invscaling: lr / sqrt(epoch + 1)

std::string toString(Activation a);
Activation parseActivation(const std::string& s);
std::string toString(LrSchedule s);
LrSchedule parseLrSchedule(const std::string& s);

// Adam settings (beta1, beta2, epsilon, batch size) are not tuned by the
// grid; their defaults match common library practice.
struct MlpParams {
  std::vector<int> hiddenSizes{51, 13};
  Activation activation = Activation::Relu;
  double l2Alpha = 0.01;
  double learningRate = 1e-3;
  LrSchedule schedule = LrSchedule::Constant;
  int epochs = 200;
  int batchSize = 200;
  double beta1 = 0.9, beta2 = 0.999, epsilon = 1e-8;
  double tolerance = 1e-4;  // stop after `patience` epochs without this much loss improvement
  int patience = 10;

  void validate() const;
};

// Softmax network on z-scored inputs. Loss is mean cross-entropy plus
// l2Alpha / (2n) * sum of squared weights (biases excluded).
class Mlp {
 public:
  static Mlp fit(const Dataset& ds, const MlpParams& params, std::uint64_t seed);

  // Untrained network with Glorot-uniform weights and identity scaling.
  static Mlp initialize(int inputs, int classes, const MlpParams& params, std::uint64_t seed);

  std::vector<double> proba(const Eigen::RowVectorXd& x) const;
  int predict(const Eigen::RowVectorXd& x) const;

  // Loss on raw inputs and its gradient with respect to parameters(); used by
  // training and by finite-difference checks.
  double loss(const Eigen::MatrixXd& X, const std::vector<int>& y, double l2Alpha) const;
  double lossAndGradient(const Eigen::MatrixXd& X, const std::vector<int>& y, double l2Alpha,
                         Eigen::VectorXd& grad) const;
  Eigen::VectorXd parameters() const;
  void setParameters(const Eigen::VectorXd& p);

  const std::vector<double>& lossCurve() const { return lossCurve_; }

  void save(std::ostream& out) const;
  static Mlp load(std::istream& in);

 private:
  Eigen::MatrixXd forward(const Eigen::MatrixXd& Xs, std::vector<Eigen::MatrixXd>* acts) const;
  Eigen::MatrixXd standardize(const Eigen::MatrixXd& X) const;

  Activation activation_ = Activation::Relu;
  std::vector<Eigen::MatrixXd> W_;  // layer l maps width(l) -> width(l+1)
  std::vector<Eigen::RowVectorXd> b_;
  Eigen::RowVectorXd mean_, scale_;
  std::vector<double> lossCurve_;
};

}  // namespace ispar::ml
