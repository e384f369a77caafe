#include "ispar/sim/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "ispar/common/error.hpp"

namespace ispar::sim {

namespace {

constexpr int kMaxSegmentIterations = 200;
constexpr int kMaxReversals = 3;

// Segments ordered along the curve; ids 1 and -1 share ordinal 0.
int ordinal(int id) { return id > 0 ? id - 1 : id + 1; }
int segmentId(int ord) { return ord >= 0 ? ord + 1 : ord - 1; }

void checkNode(NodeId n, int count) {
  if (n < kGround || n >= count) throw InvalidInput("circuit: node id out of range");
}

}  // namespace

double SourceWaveform::scaleAt(double t) const {
  double s = 1.0;
  for (const auto& [time, value] : scaleSteps) {
    if (t >= time) s = value;
  }
  return s;
}

Circuit::Circuit(double dt, double omega, double strayConductance)
    : dt_(dt), omega_(omega), stray_(strayConductance) {
  if (!(dt > 0.0) || !(omega > 0.0) || !(strayConductance >= 0.0)) {
    throw InvalidInput("circuit: step, frequency and stray conductance must be positive");
  }
}

NodeId Circuit::addNode() { return nodes_++; }

BranchId Circuit::addRL(NodeId a, NodeId b, double r, double l) {
  checkNode(a, nodes_);
  checkNode(b, nodes_);
  if (!(r >= 0.0) || !(l >= 0.0) || (r == 0.0 && l == 0.0)) {
    throw InvalidInput("circuit: RL branch needs non-negative R, L, not both zero");
  }
  Branch br;
  br.kind = Kind::RL;
  br.a = a;
  br.b = b;
  br.r = r;
  br.l = l;
  branches_.push_back(br);
  return static_cast<BranchId>(branches_.size() - 1);
}

BranchId Circuit::addCapacitor(NodeId a, NodeId b, double c) {
  checkNode(a, nodes_);
  checkNode(b, nodes_);
  if (!(c > 0.0)) throw InvalidInput("circuit: capacitance must be positive");
  Branch br;
  br.kind = Kind::Capacitor;
  br.a = a;
  br.b = b;
  br.c = c;
  branches_.push_back(br);
  return static_cast<BranchId>(branches_.size() - 1);
}

BranchId Circuit::addSource(NodeId node, SourceWaveform e, double r, double l) {
  checkNode(node, nodes_);
  if (node == kGround) throw InvalidInput("circuit: source must feed a node");
  if (!(r >= 0.0) || !(l >= 0.0) || (r == 0.0 && l == 0.0)) {
    throw InvalidInput("circuit: source impedance must be non-zero");
  }
  Branch br;
  br.kind = Kind::Source;
  br.a = kGround;
  br.b = node;
  br.r = r;
  br.l = l;
  br.source = std::move(e);
  branches_.push_back(br);
  return static_cast<BranchId>(branches_.size() - 1);
}

BranchId Circuit::addSwitch(NodeId a, NodeId b, bool closed, std::vector<double> toggleTimes,
                            double rClosed, double rOpen) {
  checkNode(a, nodes_);
  checkNode(b, nodes_);
  if (!(rClosed > 0.0) || !(rOpen > rClosed)) {
    throw InvalidInput("circuit: switch resistances must satisfy 0 < closed < open");
  }
  std::sort(toggleTimes.begin(), toggleTimes.end());
  Branch br;
  br.kind = Kind::Switch;
  br.a = a;
  br.b = b;
  br.closed = closed;
  br.toggles = std::move(toggleTimes);
  br.rClosed = rClosed;
  br.rOpen = rOpen;
  branches_.push_back(br);
  return static_cast<BranchId>(branches_.size() - 1);
}

std::vector<BranchId> Circuit::addCore(const CoreCharacteristic& core, double residualFlux,
                                       const std::vector<CoilSpec>& coils) {
  if (coils.empty()) throw InvalidInput("circuit: core needs at least one coil");
  Core c;
  c.ch = core;
  c.residual = residualFlux;
  c.offset = core.current(residualFlux);
  const auto m = static_cast<Eigen::Index>(coils.size());
  c.leak.resize(m);
  c.turns.resize(m);
  c.res.resize(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto& cs = coils[static_cast<std::size_t>(k)];
    checkNode(cs.a, nodes_);
    checkNode(cs.b, nodes_);
    if (!(cs.leakage > 0.0) || !(cs.turns > 0.0) || !(cs.resistance >= 0.0)) {
      throw InvalidInput("circuit: coil needs positive leakage and turns");
    }
    c.leak(k) = cs.leakage;
    c.turns(k) = cs.turns;
    c.res(k) = cs.resistance;
    Branch br;
    br.kind = Kind::Coil;
    br.a = cs.a;
    br.b = cs.b;
    br.core = static_cast<int>(cores_.size());
    branches_.push_back(br);
    c.coils.push_back(static_cast<BranchId>(branches_.size() - 1));
  }
  c.seg = core.segmentAt(c.offset);
  cores_.push_back(std::move(c));
  return cores_.back().coils;
}

double Circuit::emf(const Branch& br, double t) const {
  return br.source.scaleAt(t) * br.source.amplitude * std::cos(omega_ * t + br.source.phase);
}

double Circuit::conductance(const Branch& br) const {
  switch (br.kind) {
    case Kind::RL:
    case Kind::Source: return 1.0 / (br.r + 2.0 * br.l / dt_);
    case Kind::Capacitor: return 2.0 * br.c / dt_;
    case Kind::Switch: return 1.0 / (br.closed ? br.rClosed : br.rOpen);
    case Kind::Coil: return 0.0;
  }
  return 0.0;
}

double Circuit::coreFlux(const Core& c, const Eigen::VectorXd& i) const {
  return c.ch.flux(c.turns.dot(i) + c.offset);
}

void Circuit::initialize() {
  using cd = std::complex<double>;
  const double w = (2.0 / dt_) * std::tan(omega_ * dt_ / 2.0);  // discrete reactance factor
  const int n = nodes_;
  Eigen::MatrixXcd Y = Eigen::MatrixXcd::Zero(n, n);
  Eigen::VectorXcd inj = Eigen::VectorXcd::Zero(n);
  for (int k = 0; k < n; ++k) Y(k, k) += stray_;

  auto stamp = [&](NodeId a, NodeId b, cd y) {
    if (a != kGround) Y(a, a) += y;
    if (b != kGround) Y(b, b) += y;
    if (a != kGround && b != kGround) {
      Y(a, b) -= y;
      Y(b, a) -= y;
    }
  };

  std::vector<cd> ybr(branches_.size(), cd{});
  for (std::size_t k = 0; k < branches_.size(); ++k) {
    auto& br = branches_[k];
    br.nextToggle = 0;
    switch (br.kind) {
      case Kind::RL:
      case Kind::Source: ybr[k] = 1.0 / cd(br.r, w * br.l); break;
      case Kind::Capacitor: ybr[k] = cd(0.0, w * br.c); break;
      case Kind::Switch: ybr[k] = 1.0 / (br.closed ? br.rClosed : br.rOpen); break;
      case Kind::Coil: continue;
    }
    stamp(br.a, br.b, ybr[k]);
    if (br.kind == Kind::Source) {
      const cd e = br.source.scaleAt(0.0) * std::polar(br.source.amplitude, br.source.phase);
      inj(br.b) += ybr[k] * e;
    }
  }
  std::vector<Eigen::MatrixXcd> ycore;
  for (const auto& c : cores_) {
    const double s0 = c.ch.unsaturatedInductance();
    Eigen::MatrixXcd Z = (cd(0.0, w * s0) * (c.turns * c.turns.transpose())).eval();
    for (Eigen::Index k = 0; k < c.leak.size(); ++k) Z(k, k) += cd(c.res(k), w * c.leak(k));
    Eigen::MatrixXcd yc = Z.inverse();
    const auto m = static_cast<Eigen::Index>(c.coils.size());
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto& bj = branches_[static_cast<std::size_t>(c.coils[static_cast<std::size_t>(j)])];
      for (Eigen::Index k = 0; k < m; ++k) {
        const auto& bk = branches_[static_cast<std::size_t>(c.coils[static_cast<std::size_t>(k)])];
        const cd y = yc(j, k);
        if (bj.a != kGround && bk.a != kGround) Y(bj.a, bk.a) += y;
        if (bj.a != kGround && bk.b != kGround) Y(bj.a, bk.b) -= y;
        if (bj.b != kGround && bk.a != kGround) Y(bj.b, bk.a) -= y;
        if (bj.b != kGround && bk.b != kGround) Y(bj.b, bk.b) += y;
      }
    }
    ycore.push_back(std::move(yc));
  }

  const Eigen::VectorXcd V = n > 0 ? Eigen::VectorXcd(Y.partialPivLu().solve(inj)) : Eigen::VectorXcd();
  auto nodeV = [&](NodeId id) { return id == kGround ? cd{} : V(id); };

  for (std::size_t k = 0; k < branches_.size(); ++k) {
    auto& br = branches_[k];
    if (br.kind == Kind::Coil) continue;
    cd v = nodeV(br.a) - nodeV(br.b);
    if (br.kind == Kind::Source) {
      v = br.source.scaleAt(0.0) * std::polar(br.source.amplitude, br.source.phase) - nodeV(br.b);
    }
    br.v = v.real();
    br.i = (ybr[k] * v).real();
  }
  for (std::size_t ci = 0; ci < cores_.size(); ++ci) {
    auto& c = cores_[ci];
    const auto m = static_cast<Eigen::Index>(c.coils.size());
    Eigen::VectorXcd vc(m);
    for (Eigen::Index k = 0; k < m; ++k) {
      const auto& br = branches_[static_cast<std::size_t>(c.coils[static_cast<std::size_t>(k)])];
      vc(k) = nodeV(br.a) - nodeV(br.b);
    }
    const Eigen::VectorXcd ic = ycore[ci] * vc;
    Eigen::VectorXd i0(m);
    for (Eigen::Index k = 0; k < m; ++k) {
      auto& br = branches_[static_cast<std::size_t>(c.coils[static_cast<std::size_t>(k)])];
      br.v = vc(k).real();
      br.i = ic(k).real();
      i0(k) = br.i;
    }
    c.seg = c.ch.segmentAt(c.turns.dot(i0) + c.offset);
  }
  volt_.resize(n);
  for (int k = 0; k < n; ++k) volt_(k) = V(k).real();
  rhs_.resize(n);
  Y_.resize(n, n);
  time_ = 0.0;
  steps_ = 0;
  dirty_ = true;
  initialized_ = true;
}

void Circuit::prepareHistory(double tNew) {
  const double eps = 1e-9 * dt_;
  for (auto& br : branches_) {
    switch (br.kind) {
      case Kind::Switch:
        while (br.nextToggle < br.toggles.size() && br.toggles[br.nextToggle] <= tNew + eps) {
          br.closed = !br.closed;
          ++br.nextToggle;
          dirty_ = true;
        }
        br.g = conductance(br);
        br.h = 0.0;
        break;
      case Kind::RL:
      case Kind::Source:
        br.g = conductance(br);
        br.h = br.g * (br.v + (2.0 * br.l / dt_ - br.r) * br.i);
        break;
      case Kind::Capacitor:
        br.g = conductance(br);
        br.h = -br.g * br.v - br.i;
        break;
      case Kind::Coil: break;
    }
  }
  for (auto& c : cores_) {
    const auto m = static_cast<Eigen::Index>(c.coils.size());
    Eigen::VectorXd i(m), v(m);
    for (Eigen::Index k = 0; k < m; ++k) {
      const auto& br = branches_[static_cast<std::size_t>(c.coils[static_cast<std::size_t>(k)])];
      i(k) = br.i;
      v(k) = br.v;
    }
    const double phi = coreFlux(c, i);
    c.hist = (c.leak.array() * i.array()).matrix() + c.turns * phi +
             (dt_ / 2.0) * (v - (c.res.array() * i.array()).matrix());
  }
}

void Circuit::linearizeCore(Core& c) const {
  const double s = c.seg.slope;
  const double c0 = c.seg.intercept + s * c.offset;
  Eigen::MatrixXd A = s * (c.turns * c.turns.transpose());
  A.diagonal() += c.leak + (dt_ / 2.0) * c.res;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  c.G = (dt_ / 2.0) * ldlt.solve(Eigen::MatrixXd::Identity(A.rows(), A.cols()));
  c.h = ldlt.solve(c.hist - c.turns * c0);
}

void Circuit::assemble() {
  Y_.setZero();
  for (int k = 0; k < nodes_; ++k) Y_(k, k) += stray_;
  for (const auto& br : branches_) {
    if (br.kind == Kind::Coil) continue;
    const double g = br.g;
    if (br.a != kGround) Y_(br.a, br.a) += g;
    if (br.b != kGround) Y_(br.b, br.b) += g;
    if (br.a != kGround && br.b != kGround) {
      Y_(br.a, br.b) -= g;
      Y_(br.b, br.a) -= g;
    }
  }
  for (const auto& c : cores_) {
    const auto m = static_cast<Eigen::Index>(c.coils.size());
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto& bj = branches_[static_cast<std::size_t>(c.coils[static_cast<std::size_t>(j)])];
      for (Eigen::Index k = 0; k < m; ++k) {
        const auto& bk = branches_[static_cast<std::size_t>(c.coils[static_cast<std::size_t>(k)])];
        const double y = c.G(j, k);
        if (bj.a != kGround && bk.a != kGround) Y_(bj.a, bk.a) += y;
        if (bj.a != kGround && bk.b != kGround) Y_(bj.a, bk.b) -= y;
        if (bj.b != kGround && bk.a != kGround) Y_(bj.b, bk.a) -= y;
        if (bj.b != kGround && bk.b != kGround) Y_(bj.b, bk.b) += y;
      }
    }
  }
  lu_.compute(Y_);
}

void Circuit::step() {
  if (!initialized_) initialize();
  const double tNew = static_cast<double>(steps_ + 1) * dt_;
  prepareHistory(tNew);

  Eigen::VectorXd V;
  for (auto& c : cores_) {
    c.lastOrdinal = ordinal(c.seg.id);
    c.reversals = 0;
    c.frozen = false;
  }
  bool settled = false;
  for (int iter = 0; iter < kMaxSegmentIterations && !settled; ++iter) {
    for (auto& c : cores_) linearizeCore(c);
    if (dirty_) {
      assemble();
      dirty_ = false;
    }
    rhs_.setZero();
    for (const auto& br : branches_) {
      switch (br.kind) {
        case Kind::Source: rhs_(br.b) += br.g * emf(br, tNew) + br.h; break;
        case Kind::Coil: break;
        default:
          if (br.a != kGround) rhs_(br.a) -= br.h;
          if (br.b != kGround) rhs_(br.b) += br.h;
      }
    }
    for (const auto& c : cores_) {
      for (std::size_t k = 0; k < c.coils.size(); ++k) {
        const auto& br = branches_[static_cast<std::size_t>(c.coils[k])];
        const double h = c.h(static_cast<Eigen::Index>(k));
        if (br.a != kGround) rhs_(br.a) -= h;
        if (br.b != kGround) rhs_(br.b) += h;
      }
    }
    V = lu_.solve(rhs_);

    settled = true;
    for (auto& c : cores_) {
      const auto m = static_cast<Eigen::Index>(c.coils.size());
      Eigen::VectorXd v(m);
      for (Eigen::Index k = 0; k < m; ++k) {
        const auto& br = branches_[static_cast<std::size_t>(c.coils[static_cast<std::size_t>(k)])];
        v(k) = (br.a == kGround ? 0.0 : V(br.a)) - (br.b == kGround ? 0.0 : V(br.b));
      }
      const Eigen::VectorXd i = c.G * v + c.h;
      if (c.frozen) continue;
      const int cur = ordinal(c.seg.id);
      const int want = ordinal(c.ch.segmentAt(c.turns.dot(i) + c.offset).id);
      if (want == cur) continue;
      // One segment per iteration; a core bouncing between two neighbours
      // sits on their shared breakpoint and is held where it is.
      const int next = cur + (want > cur ? 1 : -1);
      if (iter > 0 && next == c.lastOrdinal && ++c.reversals >= kMaxReversals) {
        c.frozen = true;
        continue;
      }
      c.lastOrdinal = cur;
      const auto seg = c.ch.map().segment(segmentId(next));
      if (seg.slope != c.seg.slope) dirty_ = true;
      c.seg = seg;
      settled = false;
    }
  }
  if (!settled) {
    throw SimulationFault("circuit: saturable core iteration did not settle at t = " +
                          std::to_string(tNew));
  }

  volt_ = V;
  if (!volt_.allFinite()) {
    throw SimulationFault("circuit: non-finite node voltage at t = " + std::to_string(tNew));
  }
  for (auto& br : branches_) {
    const double va = br.a == kGround ? 0.0 : volt_(br.a);
    const double vb = br.b == kGround ? 0.0 : volt_(br.b);
    switch (br.kind) {
      case Kind::Source:
        br.v = emf(br, tNew) - vb;
        br.i = br.g * br.v + br.h;
        break;
      case Kind::Coil: br.v = va - vb; break;
      default:
        br.v = va - vb;
        br.i = br.g * br.v + br.h;
    }
  }
  for (const auto& c : cores_) {
    const auto m = static_cast<Eigen::Index>(c.coils.size());
    Eigen::VectorXd v(m);
    for (Eigen::Index k = 0; k < m; ++k) {
      v(k) = branches_[static_cast<std::size_t>(c.coils[static_cast<std::size_t>(k)])].v;
    }
    const Eigen::VectorXd i = c.G * v + c.h;
    for (Eigen::Index k = 0; k < m; ++k) {
      branches_[static_cast<std::size_t>(c.coils[static_cast<std::size_t>(k)])].i = i(k);
    }
    if (!i.allFinite()) {
      throw SimulationFault("circuit: non-finite coil current at t = " + std::to_string(tNew));
    }
  }
  time_ = tNew;
  ++steps_;
}

}  // namespace ispar::sim
