#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "hetsync/network.hpp"

namespace hetsync {

struct NoDisturbance {};

/// Unit impulse on disturbance channel `channel` (0-based) at t = 0,
/// applied as the jump x_o(0+) = x_o(0) + E_o e_channel.
struct ImpulseDisturbance {
  int channel = 0;
};

/// Sampled d(t); linear interpolation between samples, held constant outside.
struct SampledDisturbance {
  std::vector<double> times;
  std::vector<linalg::Vector> values;
};

using Disturbance = std::variant<NoDisturbance, ImpulseDisturbance, SampledDisturbance>;

struct SimConfig {
  double t_final = 30.0;
  double dt = 0.01;
  std::vector<linalg::Vector> x0;  ///< per agent, length n_i
  std::vector<linalg::Vector> w0;  ///< per agent, length n_i; empty means zero
  std::vector<linalg::Vector> v0;  ///< per agent, length r; empty means zero
  Disturbance disturbance = NoDisturbance{};
};

struct Trajectory {
  std::vector<double> time;
  std::vector<linalg::Vector> state;  ///< stacked x_o
  std::vector<linalg::Vector> z;      ///< stacked agent outputs
  std::vector<linalg::Vector> zeta;   ///< weighted edge disagreements
  std::vector<std::string> warnings;

  std::size_t size() const { return time.size(); }
};

/// Fixed-step classical RK4 on x_o' = A_o x_o + E_o d(t). Throws StepTooLarge
/// when the state norm exceeds 1e9. A step above 0.1 / rho(A_o) only
/// produces a warning.
Trajectory simulate(const ClosedLoopNetwork& net, const SimConfig& cfg);

/// Stacked initial state x_o(0) built from the per-agent pieces.
linalg::Vector initial_state(const ClosedLoopNetwork& net, const SimConfig& cfg);

/// Largest step the explicit integrator is allowed without a warning.
double max_stable_step(const ClosedLoopNetwork& net);

struct SyncMetrics {
  std::vector<double> z_gap;           ///< max_{i,j} |z_i - z_j|_inf
  std::vector<double> v_disagreement;  ///< max_{i,j} |v_i - v_j|_inf
  std::vector<double> observer_error;  ///< max_i |w_i - Pi_i v_i|_inf

  double final_z_gap() const { return z_gap.back(); }
  double final_v_disagreement() const { return v_disagreement.back(); }
  double final_observer_error() const { return observer_error.back(); }
  bool synchronized(double tol) const;
};

SyncMetrics sync_metrics(const Trajectory& traj, const ClosedLoopNetwork& net);

/// CSV with header t,z_<i>_<k>...,zeta_<e>_<k>...,metric_z_gap,
/// metric_v_disagreement,metric_observer_error; shortest round-trip
/// decimal formatting.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const SyncMetrics& metrics,
                          const ClosedLoopNetwork& net);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

}  // namespace hetsync
