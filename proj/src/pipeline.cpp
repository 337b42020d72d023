#include "hetsync/pipeline.hpp"

#include <sstream>

namespace hetsync {

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::Config:
    case Errc::InvalidArgument:
    case Errc::DimensionMismatch:
    case Errc::NonFinite:
    case Errc::NotSymmetric:
    case Errc::SelfLoop:
    case Errc::DuplicateEdge:
    case Errc::NonPositiveWeight:
    case Errc::Disconnected:
    case Errc::ValidationFailed:
      return kExitValidation;
    case Errc::Io:
      return kExitIo;
    default:
      return kExitSolver;
  }
}

std::vector<double> Design::bound_terms() const {
  std::vector<double> out;
  for (const auto& k : gains) out.push_back(k.bound_term);
  return out;
}

namespace {

void require_passed(const ValidationReport& report, const std::string& who) {
  if (const Finding* f = report.first_failure()) {
    std::ostringstream os;
    os << who << ": check " << f->check << " failed (" << f->detail << ")";
    throw Error(Errc::ValidationFailed, os.str());
  }
}

std::string agent_name(const NetworkSpec& spec, std::size_t i) {
  return "agent " + std::to_string(i + 1) + " '" + spec.agents[i].label + "'";
}

}  // namespace

Design design_protocol(const NetworkSpec& spec) {
  Design d{spec, build_graph(spec.node_count, spec.edges), {}, {}, {}, {}};

  d.exosystem_report = validate_exosystem(spec.exosystem);
  require_passed(d.exosystem_report, "exosystem");
  require_common_output_dim(spec.agents, spec.exosystem);

  for (std::size_t i = 0; i < spec.agents.size(); ++i) {
    d.agent_reports.push_back(validate_agent(spec.agents[i]));
    require_passed(d.agent_reports.back(), agent_name(spec, i));
  }

  for (std::size_t i = 0; i < spec.agents.size(); ++i) {
    const auto& m = spec.agents[i];
    const int label = static_cast<int>(i) + 1;
    try {
      d.regulators.push_back(solve_regulator(m, spec.exosystem));
      d.gains.push_back(
          synthesize_agent(m, spec.synthesis.epsilon_for(label), spec.synthesis.sigma_for(label)));
    } catch (const Error& e) {
      throw Error(e.code(), agent_name(spec, i) + ": " + e.what());
    }
  }
  return d;
}

ClosedLoopNetwork assemble(const Design& d) {
  return assemble(d.spec.agents, d.gains, d.regulators, d.spec.exosystem, d.graph);
}

}  // namespace hetsync
