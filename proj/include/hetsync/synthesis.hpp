#pragma once

#include <vector>

#include "hetsync/agents.hpp"
#include "hetsync/graph.hpp"

namespace hetsync {

inline constexpr double kDefaultEpsilon = 1e-3;
inline constexpr double kDefaultSigma = 1e-3;
inline constexpr double kDefaultGammaSlack = 0.125;

/// Per-agent protocol gains with their Riccati certificates.
struct AgentGains {
  linalg::Matrix F;  ///< -B^T P
  linalg::Matrix G;  ///< Q C1^T
  linalg::Matrix P;
  linalg::Matrix Q;
  double epsilon = kDefaultEpsilon;
  double sigma = kDefaultSigma;
  /// tr(C1 Q P Q C1^T) + tr(C2 Q C2^T), an upper bound on the agent's H2 cost.
  double bound_term = 0.0;
};

using ProtocolGains = std::vector<AgentGains>;

/// Solves the epsilon/sigma-perturbed control and filter Riccati equations
///
///   A^T P + P A - P B B^T P + C2^T C2 + epsilon I = 0
///   A Q + Q A^T - Q C1^T C1 Q + E E^T + sigma I = 0
///
/// and returns F = -B^T P, G = Q C1^T. The strict Riccati inequalities, the
/// definiteness of P and Q and the Hurwitz property of A + B F and A - G C1
/// are all checked before returning (InequalityViolated otherwise).
AgentGains synthesize_agent(const AgentModel& m, double epsilon, double sigma);

/// Left-hand side of the control Riccati inequality at P (negative definite
/// when the inequality holds strictly).
linalg::Matrix control_riccati_lhs(const AgentModel& m, const linalg::Matrix& p);
/// Left-hand side of the filter Riccati inequality at Q.
linalg::Matrix filter_riccati_lhs(const AgentModel& m, const linalg::Matrix& q);

double bound_term(const AgentModel& m, const linalg::Matrix& p, const linalg::Matrix& q);

struct FeasibilityVerdict {
  bool feasible = false;
  double threshold = 0.0;       ///< gamma / (N lambda_N)
  std::vector<double> margins;  ///< threshold - S_i; must be strictly positive
  std::vector<int> violating;   ///< 1-based agents with margin <= 0
};

/// Per-agent sufficient condition S_i < gamma / (N lambda_N). Equality is
/// infeasible.
FeasibilityVerdict check_feasibility(const ProtocolGains& gains, const CommGraph& g, double gamma);

struct GammaSuggestion {
  double gamma = 0.0;
  /// True when slack is zero, i.e. gamma sits exactly on the strict boundary
  /// and is itself infeasible.
  bool boundary = false;
};

/// gamma = N lambda_N max_i S_i (1 + slack), with a 1e-12 floor when every
/// S_i vanishes.
GammaSuggestion suggest_gamma(const std::vector<double>& bound_terms, const CommGraph& g,
                              double slack = kDefaultGammaSlack);

}  // namespace hetsync
