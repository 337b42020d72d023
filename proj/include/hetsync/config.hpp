#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hetsync/agents.hpp"
#include "hetsync/graph.hpp"
#include "hetsync/simulator.hpp"
#include "hetsync/synthesis.hpp"

namespace hetsync {

struct AgentOverride {
  int agent = 0;  ///< 1-based
  std::optional<double> epsilon;
  std::optional<double> sigma;
};

struct SynthesisSettings {
  std::optional<double> gamma;
  double epsilon = kDefaultEpsilon;
  double sigma = kDefaultSigma;
  double slack = kDefaultGammaSlack;
  std::vector<AgentOverride> overrides;

  double epsilon_for(int agent) const;  ///< 1-based
  double sigma_for(int agent) const;
};

struct SimulationSettings {
  SimConfig config;
  double tolerance = 1e-2;
};

/// Declarative network description read from a JSON document.
struct NetworkSpec {
  std::vector<AgentModel> agents;
  Exosystem exosystem;
  int node_count = 0;
  std::vector<WeightedEdge> edges;
  SynthesisSettings synthesis;
  std::optional<SimulationSettings> simulation;
};

/// Throws Error{Config} naming the offending field path, e.g. "agents[2].C1".
NetworkSpec parse_spec(const nlohmann::json& doc);
NetworkSpec parse_spec_text(const std::string& text);
/// Throws Error{Io} if the file cannot be read.
NetworkSpec load_spec(const std::filesystem::path& path);

linalg::Matrix matrix_from_json(const nlohmann::json& value, const std::string& path);
nlohmann::json matrix_to_json(const linalg::Matrix& m);

}  // namespace hetsync
