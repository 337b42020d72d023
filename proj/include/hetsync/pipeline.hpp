#pragma once

#include <vector>

#include "hetsync/config.hpp"
#include "hetsync/network.hpp"
#include "hetsync/regulator.hpp"

namespace hetsync {

/// Process exit codes shared by every command.
enum ExitCode : int {
  kExitOk = 0,
  kExitAssertion = 1,
  kExitValidation = 2,
  kExitSolver = 3,
  kExitIo = 4,
};

int exit_code_for(Errc code);

/// Everything derived from a NetworkSpec up to and including the gains.
struct Design {
  NetworkSpec spec;
  CommGraph graph;
  ValidationReport exosystem_report;
  std::vector<ValidationReport> agent_reports;
  std::vector<RegulatorSolution> regulators;
  ProtocolGains gains;

  std::vector<double> bound_terms() const;
};

/// Validation, regulator equations and per-agent synthesis. Validation
/// failures throw Error{ValidationFailed} naming the agent and the failing
/// check; solver failures propagate with the agent label prefixed.
Design design_protocol(const NetworkSpec& spec);

ClosedLoopNetwork assemble(const Design& d);

}  // namespace hetsync
