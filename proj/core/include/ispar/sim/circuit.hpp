#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "ispar/sim/saturation.hpp"

namespace ispar::sim {

using NodeId = int;
using BranchId = int;
inline constexpr NodeId kGround = -1;

// e(t) = scale(t) * amplitude * cos(omega * t + phase); scale is 1 before the
// first step and takes each step's value from its time onward.
struct SourceWaveform {
  double amplitude = 0.0;  // V peak
  double phase = 0.0;      // rad
  std::vector<std::pair<double, double>> scaleSteps;

  double scaleAt(double t) const;
};

// One coil of a saturable multi-winding core. Its flux linkage is
// leakage * i + turns * F(sum_j turns_j * i_j + residual offset).
struct CoilSpec {
  NodeId a = kGround;
  NodeId b = kGround;
  double leakage = 0.0;     // H, > 0
  double turns = 1.0;       // relative to the core's reference winding
  double resistance = 0.0;  // ohm
};

// Nodal trapezoidal-rule network solver with a fixed step. Every branch
// current is oriented from its first node to its second node (sources: from
// ground into the node).
class Circuit {
 public:
  Circuit(double dt, double omega, double strayConductance = 1e-9);

  NodeId addNode();
  int nodeCount() const { return nodes_; }

  BranchId addRL(NodeId a, NodeId b, double r, double l);
  BranchId addCapacitor(NodeId a, NodeId b, double c);
  BranchId addSource(NodeId node, SourceWaveform e, double r, double l);
  // Ideal time-toggled resistor; the state flips at every toggle time.
  BranchId addSwitch(NodeId a, NodeId b, bool closed, std::vector<double> toggleTimes,
                     double rClosed, double rOpen = 1e9);
  // Returns the branch ids of the coils in order. `residualFlux` is the flux
  // linkage (reference winding) the core holds at zero magnetizing current.
  std::vector<BranchId> addCore(const CoreCharacteristic& core, double residualFlux,
                                const std::vector<CoilSpec>& coils);

  // Solves the periodic discrete steady state with every core on its
  // unsaturated slope and switches in their initial state, and loads it as
  // the state at t = 0.
  void initialize();
  // Advances one step. Throws SimulationFault on non-finite state or when
  // the piecewise-linear core iteration does not settle.
  void step();

  double time() const { return time_; }
  double dt() const { return dt_; }
  double current(BranchId b) const { return branches_.at(static_cast<std::size_t>(b)).i; }
  double branchVoltage(BranchId b) const { return branches_.at(static_cast<std::size_t>(b)).v; }
  double voltage(NodeId n) const { return n == kGround ? 0.0 : volt_(n); }
  int branchCount() const { return static_cast<int>(branches_.size()); }

 private:
  enum class Kind { RL, Capacitor, Source, Switch, Coil };
  struct Branch {
    Kind kind = Kind::RL;
    NodeId a = kGround;
    NodeId b = kGround;
    double r = 0.0;
    double l = 0.0;
    double c = 0.0;
    SourceWaveform source;
    bool closed = false;
    std::vector<double> toggles;
    std::size_t nextToggle = 0;
    double rClosed = 0.0;
    double rOpen = 0.0;
    int core = -1;
    // state at the last solved instant
    double i = 0.0;
    double v = 0.0;  // a - b (source: emf - node)
    // per-step companion model
    double g = 0.0;
    double h = 0.0;
  };
  struct Core {
    CoreCharacteristic ch;
    double residual = 0.0;   // flux linkage at zero current
    double offset = 0.0;     // current shift that places `residual` at zero
    std::vector<BranchId> coils;
    Eigen::VectorXd leak, turns, res;
    OddPiecewiseLinear::Segment seg;
    int lastOrdinal = 0;  // segment held before the latest move
    int reversals = 0;
    bool frozen = false;
    Eigen::MatrixXd G;
    Eigen::VectorXd h;
    Eigen::VectorXd hist;
  };

  double emf(const Branch& br, double t) const;
  double conductance(const Branch& br) const;
  void prepareHistory(double tNew);
  void linearizeCore(Core& c) const;
  void assemble();
  double coreFlux(const Core& c, const Eigen::VectorXd& i) const;

  double dt_;
  double omega_;
  double stray_;
  int nodes_ = 0;
  double time_ = 0.0;
  long long steps_ = 0;
  std::vector<Branch> branches_;
  std::vector<Core> cores_;
  Eigen::VectorXd volt_;
  Eigen::VectorXd rhs_;
  Eigen::MatrixXd Y_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  bool dirty_ = true;
  bool initialized_ = false;
};

}  // namespace ispar::sim
