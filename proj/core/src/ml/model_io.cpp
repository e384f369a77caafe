#include "ispar/ml/model_io.hpp"

#include <cstring>
#include <sstream>

#include "ispar/common/binary_io.hpp"
#include "ispar/common/error.hpp"

namespace ispar::ml {

namespace {

constexpr char kMagic[8] = {'I', 'S', 'P', 'A', 'R', 'M', 'D', '1'};
constexpr std::uint32_t kVersion = 1;

void writeSpec(std::ostream& out, const ModelSpec& s) {
  switch (s.kind) {
    case ModelKind::DT:
      io::writeI64(out, s.dt.maxDepth);
      io::writeI64(out, s.dt.minLeaf);
      break;
    case ModelKind::RF:
      io::writeI64(out, s.rf.nTrees);
      io::writeI64(out, s.rf.maxDepth);
      io::writeI64(out, s.rf.minLeaf);
      io::writeI64(out, s.rf.maxFeatures);
      io::writeU32(out, s.rf.bootstrap ? 1 : 0);
      break;
    case ModelKind::GB:
      io::writeF64(out, s.gb.learningRate);
      io::writeI64(out, s.gb.nEstimators);
      io::writeI64(out, s.gb.maxDepth);
      io::writeI64(out, s.gb.minLeaf);
      io::writeF64(out, s.gb.subsample);
      break;
    case ModelKind::KNN:
      io::writeI64(out, s.knn.k);
      io::writeU32(out, s.knn.metric == Metric::L1 ? 1 : 2);
      io::writeU32(out, s.knn.standardize ? 1 : 0);
      break;
    case ModelKind::GNB: io::writeF64(out, s.gnb.varianceFloor); break;
    case ModelKind::MLP: {
      const auto& p = s.mlp;
      io::writeU64(out, p.hiddenSizes.size());
      for (int h : p.hiddenSizes) io::writeI64(out, h);
      io::writeU32(out, static_cast<std::uint32_t>(p.activation));
      io::writeF64(out, p.l2Alpha);
      io::writeF64(out, p.learningRate);
      io::writeU32(out, static_cast<std::uint32_t>(p.schedule));
      io::writeI64(out, p.epochs);
      io::writeI64(out, p.batchSize);
      io::writeF64(out, p.beta1);
      io::writeF64(out, p.beta2);
      io::writeF64(out, p.epsilon);
      io::writeF64(out, p.tolerance);
      io::writeI64(out, p.patience);
      break;
    }
  }
}

ModelSpec readSpec(std::istream& in, ModelKind kind) {
  ModelSpec s;
  s.kind = kind;
  auto i = [&] { return static_cast<int>(io::readI64(in)); };
  switch (kind) {
    case ModelKind::DT:
      s.dt.maxDepth = i();
      s.dt.minLeaf = i();
      break;
    case ModelKind::RF:
      s.rf.nTrees = i();
      s.rf.maxDepth = i();
      s.rf.minLeaf = i();
      s.rf.maxFeatures = i();
      s.rf.bootstrap = io::readU32(in) != 0;
      break;
    case ModelKind::GB:
      s.gb.learningRate = io::readF64(in);
      s.gb.nEstimators = i();
      s.gb.maxDepth = i();
      s.gb.minLeaf = i();
      s.gb.subsample = io::readF64(in);
      break;
    case ModelKind::KNN:
      s.knn.k = i();
      s.knn.metric = io::readU32(in) == 1 ? Metric::L1 : Metric::L2;
      s.knn.standardize = io::readU32(in) != 0;
      break;
    case ModelKind::GNB: s.gnb.varianceFloor = io::readF64(in); break;
    case ModelKind::MLP: {
      auto& p = s.mlp;
      const auto layers = io::readU64(in);
      if (layers > 64) throw FormatError("model: bad hidden layer count");
      p.hiddenSizes.clear();
      for (std::uint64_t l = 0; l < layers; ++l) p.hiddenSizes.push_back(i());
      const auto act = io::readU32(in);
      if (act > 2) throw FormatError("model: bad activation");
      p.activation = static_cast<Activation>(act);
      p.l2Alpha = io::readF64(in);
      p.learningRate = io::readF64(in);
      const auto sched = io::readU32(in);
      if (sched > 1) throw FormatError("model: bad schedule");
      p.schedule = static_cast<LrSchedule>(sched);
      p.epochs = i();
      p.batchSize = i();
      p.beta1 = io::readF64(in);
      p.beta2 = io::readF64(in);
      p.epsilon = io::readF64(in);
      p.tolerance = io::readF64(in);
      p.patience = i();
      break;
    }
  }
  return s;
}

}  // namespace

std::string encodeModel(const TrainedModel& m) {
  std::ostringstream out(std::ios::binary);
  out.write(kMagic, sizeof kMagic);
  io::writeU32(out, kVersion);
  io::writeU32(out, static_cast<std::uint32_t>(m.kind()));
  io::writeU64(out, m.seed());
  io::writeU32(out, static_cast<std::uint32_t>(m.dimension()));
  io::writeU32(out, static_cast<std::uint32_t>(m.classCount()));
  writeSpec(out, m.spec());
  std::visit([&](const auto& impl) { impl.save(out); }, m.impl());
  return out.str();
}

TrainedModel decodeModel(std::string_view bytes) {
  if (bytes.size() < 32 || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw FormatError("model: bad magic or truncated header");
  }
  std::istringstream in(std::string(bytes.substr(sizeof kMagic)), std::ios::binary);
  if (io::readU32(in) != kVersion) throw FormatError("model: unsupported version");
  const auto tag = io::readU32(in);
  if (tag > static_cast<std::uint32_t>(ModelKind::MLP)) throw FormatError("model: unknown kind tag");
  const auto kind = static_cast<ModelKind>(tag);
  const auto seed = io::readU64(in);
  const auto dim = static_cast<int>(io::readU32(in));
  const auto classes = static_cast<int>(io::readU32(in));
  ModelSpec spec = readSpec(in, kind);
  auto make = [&](TrainedModel::Impl impl) { return TrainedModel(spec, seed, dim, classes, std::move(impl)); };
  switch (kind) {
    case ModelKind::DT: return make(DecisionTree::load(in));
    case ModelKind::RF: return make(RandomForest::load(in));
    case ModelKind::GB: return make(GradientBoosting::load(in));
    case ModelKind::KNN: return make(Knn::load(in));
    case ModelKind::GNB: return make(GaussianNB::load(in));
    case ModelKind::MLP: return make(Mlp::load(in));
  }
  throw FormatError("model: unknown kind tag");
}

std::string modelSummary(const TrainedModel& m) {
  std::ostringstream s;
  s << "model " << m.spec().describe() << "\n"
    << "seed " << m.seed() << "\n"
    << "inputs " << m.dimension() << "\n"
    << "classes " << m.classCount() << "\n";
  std::visit(
      [&](const auto& impl) {
        using T = std::decay_t<decltype(impl)>;
        if constexpr (std::is_same_v<T, DecisionTree>) {
          s << "depth " << impl.tree().depth() << "\nleaves " << impl.tree().leafCount() << "\n";
        } else if constexpr (std::is_same_v<T, RandomForest>) {
          s << "trees " << impl.trees().size() << "\n";
        } else if constexpr (std::is_same_v<T, GradientBoosting>) {
          s << "rounds " << impl.rounds() << "\nfinal_deviance " << impl.deviance().back() << "\n";
        } else if constexpr (std::is_same_v<T, Mlp>) {
          s << "epochs_run " << impl.lossCurve().size() << "\n";
          if (!impl.lossCurve().empty()) s << "final_loss " << impl.lossCurve().back() << "\n";
        }
      },
      m.impl());
  return s.str();
}

void saveModel(const std::string& path, const TrainedModel& m) {
  io::writeFileAtomic(path, encodeModel(m));
  io::writeFileAtomic(path + ".txt", modelSummary(m));
}

TrainedModel loadModel(const std::string& path) { return decodeModel(io::readFile(path)); }

}  // namespace ispar::ml
