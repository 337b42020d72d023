#pragma once

#include <string>
#include <vector>

#include "hetsync/agents.hpp"
#include "hetsync/graph.hpp"
#include "hetsync/regulator.hpp"
#include "hetsync/synthesis.hpp"

namespace hetsync {

/// Reduced per-agent closed loop of plant plus observer-based controller,
/// state (xi, omega), used to evaluate the agent's own H2 cost.
struct AgentClosedLoop {
  linalg::Matrix A;  ///< [[A, BF], [GC1, A + BF - GC1]]
  linalg::Matrix E;  ///< [E; G D1]
  linalg::Matrix C;  ///< [C2, D2 F]
};

AgentClosedLoop agent_closed_loop(const AgentModel& m, const AgentGains& k);

/// Controlled network x_o' = A_o x_o + E_o d, z = C_o x_o, zeta = C_p x_o with
/// x_o = (x, w, v) stacked agent by agent inside each group.
class ClosedLoopNetwork {
 public:
  const linalg::Matrix& A_o() const { return a_o_; }
  const linalg::Matrix& E_o() const { return e_o_; }
  const linalg::Matrix& C_o() const { return c_o_; }
  const linalg::Matrix& C_p() const { return c_p_; }

  /// Exosystem-free part [[A, BF], [GC1, A + BF - GC1]] and its conformal
  /// input and output maps.
  const linalg::Matrix& reduced_A() const { return a_bar_; }
  const linalg::Matrix& reduced_E() const { return e_bar_; }
  const linalg::Matrix& reduced_C() const { return c_bar_; }

  const std::vector<AgentClosedLoop>& agent_loops() const { return agent_loops_; }
  const std::vector<linalg::Matrix>& Pi() const { return pi_; }
  const CommGraph& graph() const { return graph_; }

  int agent_count() const { return static_cast<int>(state_dims_.size()); }
  int output_dim() const { return output_dim_; }
  int exo_dim() const { return exo_dim_; }
  int state_dim(int agent) const { return state_dims_[static_cast<std::size_t>(agent)]; }
  int total_agent_states() const { return total_states_; }
  int total_dim() const { return static_cast<int>(a_o_.rows()); }

  /// Offsets (0-based agent index) into x_o.
  int x_offset(int agent) const { return offsets_[static_cast<std::size_t>(agent)]; }
  int w_offset(int agent) const { return total_states_ + x_offset(agent); }
  int v_offset(int agent) const { return 2 * total_states_ + agent * exo_dim_; }

 private:
  friend ClosedLoopNetwork assemble(const std::vector<AgentModel>&, const ProtocolGains&,
                                    const std::vector<RegulatorSolution>&, const Exosystem&,
                                    const CommGraph&);
  explicit ClosedLoopNetwork(CommGraph g) : graph_(std::move(g)) {}

  linalg::Matrix a_o_, e_o_, c_o_, c_p_;
  linalg::Matrix a_bar_, e_bar_, c_bar_;
  std::vector<AgentClosedLoop> agent_loops_;
  std::vector<linalg::Matrix> pi_;
  std::vector<int> state_dims_;
  std::vector<int> offsets_;
  int total_states_ = 0;
  int exo_dim_ = 0;
  int output_dim_ = 0;
  CommGraph graph_;
};

ClosedLoopNetwork assemble(const std::vector<AgentModel>& agents, const ProtocolGains& gains,
                           const std::vector<RegulatorSolution>& regulators, const Exosystem& exo,
                           const CommGraph& graph);

struct H2Cost {
  double J = 0.0;              ///< network cost from d to zeta
  std::vector<double> J_i;     ///< per-agent costs of the reduced loops
  double sum_J_i() const;
};

/// Exact costs from observability Gramians. The exosystem block of x_o is
/// unreachable from d, so J is evaluated on the reduced loop with output
/// weight L (x) I_p. Throws NotHurwitz if the reduced loop is unstable.
H2Cost h2_cost(const ClosedLoopNetwork& net);

/// Cost of a single stable system x' = A x + E d, z = C x.
double h2_cost(const linalg::Matrix& a, const linalg::Matrix& e, const linalg::Matrix& c);

struct ChainCheck {
  std::string name;
  std::string relation;  ///< human-readable "lhs < rhs"
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

struct ChainReport {
  double gamma = 0.0;
  double lambda_max = 0.0;
  int agent_count = 0;
  double per_agent_threshold = 0.0;  ///< gamma / (N lambda_N)
  double aggregate_threshold = 0.0;  ///< gamma / lambda_N
  H2Cost cost;
  std::vector<double> bound_terms;
  std::vector<ChainCheck> checks;

  bool all_hold() const;
  bool cost_below_gamma() const { return cost.J < gamma; }
  const ChainCheck* first_failure() const;
};

/// Evaluates, in order: the per-agent design condition S_i < gamma/(N
/// lambda_N), the per-agent costs J_i against the same threshold, the
/// certificate J_i <= S_i, the aggregate sum J_i < gamma / lambda_N, the
/// chain J <= lambda_N sum J_i, and J < gamma. Failures are recorded, never
/// thrown.
ChainReport verify_chain(const ClosedLoopNetwork& net, const ProtocolGains& gains, double gamma);

}  // namespace hetsync
