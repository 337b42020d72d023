#pragma once

#include "hetsync/agents.hpp"

namespace hetsync {

/// Solution of A Pi + B Gamma = Pi S,  C2 Pi + D2 Gamma = R.
struct RegulatorSolution {
  linalg::Matrix Pi;
  linalg::Matrix Gamma;
  double residual_state = 0.0;   ///< |A Pi + B Gamma - Pi S|_F
  double residual_output = 0.0;  ///< |C2 Pi + D2 Gamma - R|_F
};

/// Minimum-norm least-squares solve of the vectorized regulator equations.
/// Throws NoSolution when either residual exceeds 1e-8 (relative).
RegulatorSolution solve_regulator(const AgentModel& m, const Exosystem& e);

}  // namespace hetsync
