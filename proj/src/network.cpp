#include "hetsync/network.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

namespace hetsync {

using linalg::Matrix;

AgentClosedLoop agent_closed_loop(const AgentModel& m, const AgentGains& k) {
  const Eigen::Index n = m.A.rows();
  AgentClosedLoop loop;
  loop.A.resize(2 * n, 2 * n);
  loop.A << m.A, m.B * k.F, k.G * m.C1, m.A + m.B * k.F - k.G * m.C1;
  loop.E.resize(2 * n, m.E.cols());
  loop.E << m.E, k.G * m.D1;
  loop.C.resize(m.C2.rows(), 2 * n);
  loop.C << m.C2, m.D2 * k.F;
  return loop;
}

ClosedLoopNetwork assemble(const std::vector<AgentModel>& agents, const ProtocolGains& gains,
                           const std::vector<RegulatorSolution>& regulators, const Exosystem& exo,
                           const CommGraph& graph) {
  const std::size_t count = agents.size();
  if (gains.size() != count || regulators.size() != count ||
      static_cast<int>(count) != graph.node_count()) {
    std::ostringstream os;
    os << "assemble: " << count << " agents, " << gains.size() << " gain sets, "
       << regulators.size() << " regulator solutions, " << graph.node_count() << " graph nodes";
    throw Error(Errc::DimensionMismatch, os.str());
  }
  require_common_output_dim(agents, exo);

  ClosedLoopNetwork net(graph);
  net.exo_dim_ = exo.dim();
  net.output_dim_ = exo.output_dim();

  std::vector<Matrix> a, b, c1, c2, d1, d2, e, f, g, pi, gamma;
  for (std::size_t i = 0; i < count; ++i) {
    const auto& m = agents[i];
    const auto& k = gains[i];
    const auto& reg = regulators[i];
    const Eigen::Index n = m.A.rows();
    if (k.F.rows() != m.B.cols() || k.F.cols() != n || k.G.rows() != n ||
        k.G.cols() != m.C1.rows() || reg.Pi.rows() != n || reg.Pi.cols() != exo.dim() ||
        reg.Gamma.rows() != m.B.cols() || reg.Gamma.cols() != exo.dim()) {
      throw Error(Errc::DimensionMismatch, m.label + ": gains or regulator data do not fit");
    }
    net.state_dims_.push_back(static_cast<int>(n));
    net.offsets_.push_back(net.total_states_);
    net.total_states_ += static_cast<int>(n);
    a.push_back(m.A);
    b.push_back(m.B);
    c1.push_back(m.C1);
    c2.push_back(m.C2);
    d1.push_back(m.D1);
    d2.push_back(m.D2);
    e.push_back(m.E);
    f.push_back(k.F);
    g.push_back(k.G);
    pi.push_back(reg.Pi);
    gamma.push_back(reg.Gamma);
    net.agent_loops_.push_back(agent_closed_loop(m, k));
  }
  net.pi_ = pi;

  const Matrix A = linalg::block_diag(a);
  const Matrix B = linalg::block_diag(b);
  const Matrix C1 = linalg::block_diag(c1);
  const Matrix C2 = linalg::block_diag(c2);
  const Matrix D1 = linalg::block_diag(d1);
  const Matrix D2 = linalg::block_diag(d2);
  const Matrix E = linalg::block_diag(e);
  const Matrix F = linalg::block_diag(f);
  const Matrix G = linalg::block_diag(g);
  const Matrix Pi = linalg::block_diag(pi);
  const Matrix Gamma = linalg::block_diag(gamma);

  const Eigen::Index nx = net.total_states_;
  const Eigen::Index nv = static_cast<Eigen::Index>(count) * exo.dim();
  const Eigen::Index nd = E.cols();
  const Matrix feedforward = B * Gamma - B * F * Pi;
  const Matrix consensus =
      linalg::kron(Matrix::Identity(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(count)), exo.S) -
      linalg::kron(graph.laplacian(), Matrix::Identity(exo.dim(), exo.dim()));

  net.a_o_ = Matrix::Zero(2 * nx + nv, 2 * nx + nv);
  net.a_o_.block(0, 0, nx, nx) = A;
  net.a_o_.block(0, nx, nx, nx) = B * F;
  net.a_o_.block(0, 2 * nx, nx, nv) = feedforward;
  net.a_o_.block(nx, 0, nx, nx) = G * C1;
  net.a_o_.block(nx, nx, nx, nx) = A + B * F - G * C1;
  net.a_o_.block(nx, 2 * nx, nx, nv) = feedforward;
  net.a_o_.block(2 * nx, 2 * nx, nv, nv) = consensus;

  net.e_o_ = Matrix::Zero(2 * nx + nv, nd);
  net.e_o_.topRows(nx) = E;
  net.e_o_.middleRows(nx, nx) = G * D1;

  net.c_o_ = Matrix::Zero(C2.rows(), 2 * nx + nv);
  net.c_o_.leftCols(nx) = C2;
  net.c_o_.middleCols(nx, nx) = D2 * F;
  net.c_o_.rightCols(nv) = D2 * Gamma - D2 * F * Pi;

  net.c_p_ = disagreement_lift(graph, exo.output_dim()) * net.c_o_;

  net.a_bar_ = net.a_o_.topLeftCorner(2 * nx, 2 * nx);
  net.e_bar_ = net.e_o_.topRows(2 * nx);
  net.c_bar_ = net.c_o_.leftCols(2 * nx);
  return net;
}

double H2Cost::sum_J_i() const { return std::accumulate(J_i.begin(), J_i.end(), 0.0); }

double h2_cost(const Matrix& a, const Matrix& e, const Matrix& c) {
  const Matrix gramian = linalg::solve_lyapunov(a, c.transpose() * c);
  return std::max(0.0, (e.transpose() * gramian * e).trace());
}

H2Cost h2_cost(const ClosedLoopNetwork& net) {
  H2Cost out;
  const int p = net.output_dim();
  const Matrix weight = linalg::kron(net.graph().laplacian(), Matrix::Identity(p, p));
  const Matrix& c = net.reduced_C();
  const Matrix gramian = linalg::solve_lyapunov(net.reduced_A(), c.transpose() * weight * c);
  out.J = std::max(0.0, (net.reduced_E().transpose() * gramian * net.reduced_E()).trace());
  for (const auto& loop : net.agent_loops()) out.J_i.push_back(h2_cost(loop.A, loop.E, loop.C));
  return out;
}

bool ChainReport::all_hold() const {
  return std::all_of(checks.begin(), checks.end(), [](const ChainCheck& c) { return c.holds; });
}

const ChainCheck* ChainReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.holds) return &c;
  }
  return nullptr;
}

ChainReport verify_chain(const ClosedLoopNetwork& net, const ProtocolGains& gains, double gamma) {
  ChainReport r;
  r.gamma = gamma;
  r.lambda_max = net.graph().lambda_max();
  r.agent_count = net.agent_count();
  r.per_agent_threshold = gamma / (r.agent_count * r.lambda_max);
  r.aggregate_threshold = gamma / r.lambda_max;
  r.cost = h2_cost(net);
  for (const auto& k : gains) r.bound_terms.push_back(k.bound_term);

  const double worst_bound = r.bound_terms.empty()
                                 ? 0.0
                                 : *std::max_element(r.bound_terms.begin(), r.bound_terms.end());
  const double worst_cost =
      *std::max_element(r.cost.J_i.begin(), r.cost.J_i.end());
  double worst_certificate_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r.cost.J_i.size() && i < r.bound_terms.size(); ++i) {
    worst_certificate_gap = std::max(worst_certificate_gap, r.cost.J_i[i] - r.bound_terms[i]);
  }
  const double sum = r.cost.sum_J_i();
  const double chain_rhs = r.lambda_max * sum;

  r.checks.push_back({"theorem_condition", "max_i S_i < gamma/(N*lambda_N)", worst_bound,
                      r.per_agent_threshold, worst_bound < r.per_agent_threshold});
  r.checks.push_back({"per_agent_cost", "max_i J_i < gamma/(N*lambda_N)", worst_cost,
                      r.per_agent_threshold, worst_cost < r.per_agent_threshold});
  r.checks.push_back({"cost_certificate", "max_i (J_i - S_i) <= 0", worst_certificate_gap, 0.0,
                      worst_certificate_gap <= 1e-10});
  r.checks.push_back({"aggregate_cost", "sum_i J_i < gamma/lambda_N", sum, r.aggregate_threshold,
                      sum < r.aggregate_threshold});
  r.checks.push_back({"laplacian_chain", "J <= lambda_N * sum_i J_i", r.cost.J, chain_rhs,
                      r.cost.J <= chain_rhs * (1.0 + 1e-12) + 1e-14});
  r.checks.push_back({"network_cost", "J < gamma", r.cost.J, gamma, r.cost.J < gamma});
  return r;
}

}  // namespace hetsync
