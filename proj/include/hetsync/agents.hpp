#pragma once

#include <string>
#include <vector>

#include "hetsync/linalg.hpp"

namespace hetsync {

/// One heterogeneous agent:
///   x' = A x + B u + E d,   y = C1 x + D1 d,   z = C2 x + D2 u.
struct AgentModel {
  std::string label;
  linalg::Matrix A;
  linalg::Matrix B;
  linalg::Matrix E;
  linalg::Matrix C1;
  linalg::Matrix D1;
  linalg::Matrix C2;
  linalg::Matrix D2;

  int state_dim() const { return static_cast<int>(A.rows()); }
  int input_dim() const { return static_cast<int>(B.cols()); }
  int disturbance_dim() const { return static_cast<int>(E.cols()); }
  int measurement_dim() const { return static_cast<int>(C1.rows()); }
  int output_dim() const { return static_cast<int>(C2.rows()); }
};

/// Reference generator v' = S v with synchronized output R v.
struct Exosystem {
  linalg::Matrix S;
  linalg::Matrix R;

  int dim() const { return static_cast<int>(S.rows()); }
  int output_dim() const { return static_cast<int>(R.rows()); }
};

struct Finding {
  std::string check;
  double residual = 0.0;
  bool pass = false;
  std::string detail;
};

struct ValidationReport {
  std::string subject;
  std::vector<Finding> findings;

  bool passed() const;
  /// First failing finding, or nullptr.
  const Finding* first_failure() const;
};

/// Stabilizability, detectability and the regularity identities. Throws
/// DimensionMismatch before running any check if the matrices do not fit.
ValidationReport validate_agent(const AgentModel& m);

/// Imaginary-axis spectrum of S and observability of (R, S).
ValidationReport validate_exosystem(const Exosystem& e);

/// Throws DimensionMismatch when an agent's synchronized output dimension
/// differs from the exosystem's.
void require_common_output_dim(const std::vector<AgentModel>& agents, const Exosystem& e);

}  // namespace hetsync
