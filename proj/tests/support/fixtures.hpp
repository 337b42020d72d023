#pragma once

// Shared test inputs: the bundled six-agent cycle and a family of randomized
// networks with the same exosystem.

#include <string>
#include <vector>

#include "hetsync/commands.hpp"
#include "hetsync/config.hpp"
#include "hetsync/pipeline.hpp"
#include "oracles.hpp"

namespace fixture {

using hetsync::linalg::Matrix;

inline hetsync::NetworkSpec cycle_spec() { return hetsync::parse_spec_text(hetsync::bundled_example_spec()); }

inline hetsync::Exosystem ramp_exosystem() {
  hetsync::Exosystem e;
  e.S = Matrix{{0, 1}, {0, 0}};
  e.R = Matrix{{1, 1}, {0, 1}};
  return e;
}

/// Third-order agent  x1' = x2, x2' = c x3, x3' = -f x2 - a x3 + b u  with
/// measurement x1 and output (x1 + x2, u). Solvable regulator equations need
/// f = b; the six-agent example uses a = 2, c = 1.
inline hetsync::AgentModel chain_agent(double b, double a = 2.0, double c = 1.0, double e_scale = 0.2,
                                       const std::string& label = "agent") {
  hetsync::AgentModel m;
  m.label = label;
  m.A = Matrix{{0, 1, 0}, {0, 0, c}, {0, -b, -a}};
  m.B = Matrix{{0}, {0}, {b}};
  m.E = Matrix{{0, e_scale}, {0, 0}, {0, e_scale}};
  m.C1 = Matrix{{1, 0, 0}};
  m.D1 = Matrix{{1, 0}};
  m.C2 = Matrix{{1, 1, 0}, {0, 0, 0}};
  m.D2 = Matrix{{0}, {1}};
  return m;
}

/// Second-order agent  x1' = x2, x2' = -k x2 + b u  with measurement x1 and
/// output (x1 + x2, u).
inline hetsync::AgentModel double_integrator_agent(double b, double k, double e_scale,
                                                   const std::string& label = "agent") {
  hetsync::AgentModel m;
  m.label = label;
  m.A = Matrix{{0, 1}, {0, -k}};
  m.B = Matrix{{0}, {b}};
  m.E = Matrix{{0, e_scale}, {0, e_scale}};
  m.C1 = Matrix{{1, 0}};
  m.D1 = Matrix{{1, 0}};
  m.C2 = Matrix{{1, 1}, {0, 0}};
  m.D2 = Matrix{{0}, {1}};
  // Pi = I, Gamma = [0, k/b] solves the regulator equations when k = b.
  return m;
}

/// Randomized network of two or three heterogeneous agents on a random
/// connected weighted graph. Every instance is solvable by construction.
inline hetsync::NetworkSpec random_network(oracle::Random& rng) {
  hetsync::NetworkSpec spec;
  const int n = rng.integer(2, 3);
  for (int i = 0; i < n; ++i) {
    const double b = rng.uniform(0.5, 3.0);
    const double e = rng.uniform(0.05, 0.5);
    const std::string label = "agent" + std::to_string(i + 1);
    if (rng.integer(0, 1) == 0) {
      spec.agents.push_back(chain_agent(b, rng.uniform(1.0, 3.0), rng.uniform(0.5, 2.0), e, label));
    } else {
      spec.agents.push_back(double_integrator_agent(b, b, e, label));
    }
  }
  spec.exosystem = ramp_exosystem();
  spec.node_count = n;
  for (int i = 1; i < n; ++i) spec.edges.push_back({i, i + 1, rng.uniform(0.3, 2.5)});
  if (n == 3 && rng.integer(0, 1) == 1) spec.edges.push_back({1, 3, rng.uniform(0.3, 2.5)});
  spec.synthesis.epsilon = rng.uniform(1e-4, 1e-2);
  spec.synthesis.sigma = rng.uniform(1e-4, 1e-2);
  return spec;
}

}  // namespace fixture
