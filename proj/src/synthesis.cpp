#include "hetsync/synthesis.hpp"

#include <algorithm>
#include <sstream>

namespace hetsync {

using linalg::Matrix;

Matrix control_riccati_lhs(const AgentModel& m, const Matrix& p) {
  return m.A.transpose() * p + p * m.A - p * m.B * m.B.transpose() * p +
         m.C2.transpose() * m.C2;
}

Matrix filter_riccati_lhs(const AgentModel& m, const Matrix& q) {
  return m.A * q + q * m.A.transpose() - q * m.C1.transpose() * m.C1 * q +
         m.E * m.E.transpose();
}

double bound_term(const AgentModel& m, const Matrix& p, const Matrix& q) {
  return (m.C1 * q * p * q * m.C1.transpose()).trace() + (m.C2 * q * m.C2.transpose()).trace();
}

AgentGains synthesize_agent(const AgentModel& m, double epsilon, double sigma) {
  if (!(epsilon > 0.0) || !(sigma > 0.0)) {
    throw Error(Errc::InvalidArgument, m.label + ": epsilon and sigma must be positive");
  }
  const Eigen::Index n = m.A.rows();
  const Matrix eye = Matrix::Identity(n, n);

  AgentGains out;
  out.epsilon = epsilon;
  out.sigma = sigma;
  out.P = linalg::solve_care(m.A, m.B, m.C2.transpose() * m.C2 + epsilon * eye);
  // Filter equation is the control equation of the dual pair (A^T, C1^T).
  out.Q = linalg::solve_care(m.A.transpose(), m.C1.transpose(), m.E * m.E.transpose() + sigma * eye);
  out.F = -m.B.transpose() * out.P;
  out.G = out.Q * m.C1.transpose();

  auto fail = [&](const char* what) {
    throw Error(Errc::InequalityViolated, m.label + ": " + what);
  };
  if (!linalg::is_positive_definite(out.P)) fail("P is not positive definite");
  if (!linalg::is_positive_definite(out.Q)) fail("Q is not positive definite");
  if (!linalg::is_positive_definite(linalg::symmetrize(-control_riccati_lhs(m, out.P)))) {
    fail("control Riccati inequality is not strict");
  }
  if (!linalg::is_positive_definite(linalg::symmetrize(-filter_riccati_lhs(m, out.Q)))) {
    fail("filter Riccati inequality is not strict");
  }
  if (!linalg::is_hurwitz(m.A + m.B * out.F)) fail("A + B F is not Hurwitz");
  if (!linalg::is_hurwitz(m.A - out.G * m.C1)) fail("A - G C1 is not Hurwitz");

  out.bound_term = bound_term(m, out.P, out.Q);
  return out;
}

FeasibilityVerdict check_feasibility(const ProtocolGains& gains, const CommGraph& g, double gamma) {
  if (static_cast<int>(gains.size()) != g.node_count()) {
    std::ostringstream os;
    os << "have gains for " << gains.size() << " agents but the graph has " << g.node_count()
       << " nodes";
    throw Error(Errc::InvalidArgument, os.str());
  }
  FeasibilityVerdict v;
  v.threshold = gamma / (g.node_count() * g.lambda_max());
  v.feasible = true;
  for (std::size_t i = 0; i < gains.size(); ++i) {
    const double margin = v.threshold - gains[i].bound_term;
    v.margins.push_back(margin);
    if (!(margin > 0.0)) {
      v.feasible = false;
      v.violating.push_back(static_cast<int>(i) + 1);
    }
  }
  return v;
}

GammaSuggestion suggest_gamma(const std::vector<double>& bound_terms, const CommGraph& g,
                              double slack) {
  if (bound_terms.empty()) throw Error(Errc::InvalidArgument, "no bound terms given");
  if (!(slack >= 0.0 && slack <= 1.0)) {
    throw Error(Errc::InvalidArgument, "gamma slack must lie in [0, 1]");
  }
  const double worst = *std::max_element(bound_terms.begin(), bound_terms.end());
  if (worst < 0.0) throw Error(Errc::InvalidArgument, "bound terms must be nonnegative");
  GammaSuggestion s;
  s.gamma = g.node_count() * g.lambda_max() * worst * (1.0 + slack);
  if (s.gamma <= 0.0) s.gamma = 1e-12 * (1.0 + slack);
  s.boundary = slack == 0.0 && worst > 0.0;
  return s;
}

}  // namespace hetsync
