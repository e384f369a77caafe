#include "ispar/ml/model.hpp"

#include <cstdio>
#include <sstream>

#include "ispar/common/error.hpp"

namespace ispar::ml {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string toString(ModelKind k) {
  switch (k) {
    case ModelKind::DT: return "dt";
    case ModelKind::RF: return "rf";
    case ModelKind::GB: return "gb";
    case ModelKind::KNN: return "knn";
    case ModelKind::GNB: return "gnb";
    case ModelKind::MLP: return "mlp";
  }
  return "?";
}

ModelKind parseModelKind(const std::string& s) {
  if (s == "dt") return ModelKind::DT;
  if (s == "rf") return ModelKind::RF;
  if (s == "gb") return ModelKind::GB;
  if (s == "knn") return ModelKind::KNN;
  if (s == "gnb") return ModelKind::GNB;
  if (s == "mlp") return ModelKind::MLP;
  throw InvalidInput("unknown model kind '" + s + "'");
}

void ModelSpec::validate() const {
  switch (kind) {
    case ModelKind::DT: dt.validate(); break;
    case ModelKind::RF: rf.validate(); break;
    case ModelKind::GB: gb.validate(); break;
    case ModelKind::KNN: knn.validate(); break;
    case ModelKind::GNB: gnb.validate(); break;
    case ModelKind::MLP: mlp.validate(); break;
  }
}

std::string ModelSpec::describe() const {
  std::ostringstream s;
  s << toString(kind) << "(";
  switch (kind) {
    case ModelKind::DT: s << "maxDepth=" << dt.maxDepth << ",minLeaf=" << dt.minLeaf; break;
    case ModelKind::RF:
      s << "nTrees=" << rf.nTrees << ",maxDepth=" << rf.maxDepth << ",minLeaf=" << rf.minLeaf
        << ",maxFeatures=" << rf.maxFeatures << ",bootstrap=" << (rf.bootstrap ? "true" : "false");
      break;
    case ModelKind::GB:
      s << "learningRate=" << num(gb.learningRate) << ",nEstimators=" << gb.nEstimators << ",maxDepth=" << gb.maxDepth
        << ",minLeaf=" << gb.minLeaf << ",subsample=" << num(gb.subsample);
      break;
    case ModelKind::KNN:
      s << "k=" << knn.k << ",metric=" << toString(knn.metric) << ",standardize=" << (knn.standardize ? "true" : "false");
      break;
    case ModelKind::GNB: s << "varianceFloor=" << num(gnb.varianceFloor); break;
    case ModelKind::MLP: {
      s << "hiddenSizes=";
      for (std::size_t i = 0; i < mlp.hiddenSizes.size(); ++i) s << (i ? "x" : "") << mlp.hiddenSizes[i];
      s << ",activation=" << toString(mlp.activation) << ",alpha=" << num(mlp.l2Alpha)
        << ",learningRate=" << num(mlp.learningRate) << ",schedule=" << toString(mlp.schedule)
        << ",epochs=" << mlp.epochs << ",batchSize=" << mlp.batchSize;
      break;
    }
  }
  s << ")";
  return s.str();
}

TrainedModel::TrainedModel(ModelSpec spec, std::uint64_t seed, int dimension, int classCount, Impl impl)
    : spec_(std::move(spec)), seed_(seed), dimension_(dimension), classCount_(classCount), impl_(std::move(impl)) {}

int TrainedModel::predict(const Eigen::RowVectorXd& x) const {
  if (x.size() != dimension_) throw InvalidInput("model: input dimension mismatch");
  return std::visit([&](const auto& m) { return m.predict(x); }, impl_);
}

std::vector<int> TrainedModel::predict(const Eigen::MatrixXd& X) const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(X.rows()));
  for (Eigen::Index i = 0; i < X.rows(); ++i) out.push_back(predict(Eigen::RowVectorXd(X.row(i))));
  return out;
}

std::vector<double> TrainedModel::proba(const Eigen::RowVectorXd& x) const {
  if (x.size() != dimension_) throw InvalidInput("model: input dimension mismatch");
  return std::visit([&](const auto& m) { return m.proba(x); }, impl_);
}

TrainedModel train(const ModelSpec& spec, const Dataset& ds, std::uint64_t seed, int jobs) {
  spec.validate();
  ds.validate();
  const auto d = static_cast<int>(ds.dimension());
  auto make = [&](TrainedModel::Impl impl) { return TrainedModel(spec, seed, d, ds.classCount, std::move(impl)); };
  switch (spec.kind) {
    case ModelKind::DT: return make(DecisionTree::fit(ds, spec.dt, seed));
    case ModelKind::RF: return make(RandomForest::fit(ds, spec.rf, seed, jobs));
    case ModelKind::GB: return make(GradientBoosting::fit(ds, spec.gb, seed));
    case ModelKind::KNN: return make(Knn::fit(ds, spec.knn));
    case ModelKind::GNB: return make(GaussianNB::fit(ds, spec.gnb));
    case ModelKind::MLP: return make(Mlp::fit(ds, spec.mlp, seed));
  }
  throw InvalidInput("model: unknown kind");
}

}  // namespace ispar::ml
