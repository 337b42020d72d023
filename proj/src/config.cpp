#include "hetsync/config.hpp"

#include <fstream>
#include <sstream>

namespace hetsync {

using json = nlohmann::json;
using linalg::Matrix;
using linalg::Vector;

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
  throw Error(Errc::Config, "config field '" + path + "': " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) config_error(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) config_error(path.empty() ? key : path + "." + key, "missing required field");
  return *it;
}

std::string child(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

double number(const json& value, const std::string& path) {
  if (!value.is_number()) config_error(path, "expected a number");
  return value.get<double>();
}

double positive(const json& value, const std::string& path) {
  const double x = number(value, path);
  if (!(x > 0.0)) config_error(path, "must be positive");
  return x;
}

std::optional<double> optional_positive(const json& obj, const std::string& key,
                                        const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return positive(*it, child(path, key));
}

Vector vector_from_json(const json& value, const std::string& path) {
  if (!value.is_array()) config_error(path, "expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(value.size()));
  for (std::size_t i = 0; i < value.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = number(value[i], index(path, i));
  }
  return v;
}

std::vector<Vector> vectors_from_json(const json& obj, const std::string& key,
                                      const std::string& path) {
  std::vector<Vector> out;
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return out;
  const std::string p = child(path, key);
  if (!it->is_array()) config_error(p, "expected one array per agent");
  for (std::size_t i = 0; i < it->size(); ++i) out.push_back(vector_from_json((*it)[i], index(p, i)));
  return out;
}

AgentModel agent_from_json(const json& obj, const std::string& path, std::size_t position) {
  AgentModel m;
  if (!obj.is_object()) config_error(path, "expected an object");
  m.label = obj.value("label", "agent" + std::to_string(position + 1));
  m.A = matrix_from_json(require(obj, "A", path), child(path, "A"));
  m.B = matrix_from_json(require(obj, "B", path), child(path, "B"));
  m.E = matrix_from_json(require(obj, "E", path), child(path, "E"));
  m.C1 = matrix_from_json(require(obj, "C1", path), child(path, "C1"));
  m.D1 = matrix_from_json(require(obj, "D1", path), child(path, "D1"));
  m.C2 = matrix_from_json(require(obj, "C2", path), child(path, "C2"));
  m.D2 = matrix_from_json(require(obj, "D2", path), child(path, "D2"));
  return m;
}

Disturbance disturbance_from_json(const json& obj, const std::string& path) {
  if (!obj.is_object()) config_error(path, "expected an object");
  const std::string type = obj.value("type", "none");
  if (type == "none") return NoDisturbance{};
  if (type == "impulse") {
    const json& ch = require(obj, "channel", path);
    if (!ch.is_number_integer() || ch.get<int>() < 1) {
      config_error(child(path, "channel"), "expected a 1-based channel index");
    }
    return ImpulseDisturbance{ch.get<int>() - 1};
  }
  if (type == "sampled") {
    SampledDisturbance s;
    const json& times = require(obj, "times", path);
    const Vector t = vector_from_json(times, child(path, "times"));
    s.times.assign(t.data(), t.data() + t.size());
    const json& values = require(obj, "values", path);
    if (!values.is_array()) config_error(child(path, "values"), "expected an array of samples");
    for (std::size_t i = 0; i < values.size(); ++i) {
      s.values.push_back(vector_from_json(values[i], index(child(path, "values"), i)));
    }
    if (s.values.size() != s.times.size()) {
      config_error(child(path, "values"), "needs exactly one sample per time");
    }
    return s;
  }
  config_error(child(path, "type"), "unknown disturbance type '" + type + "'");
}

}  // namespace

double SynthesisSettings::epsilon_for(int agent) const {
  for (const auto& o : overrides) {
    if (o.agent == agent && o.epsilon) return *o.epsilon;
  }
  return epsilon;
}

double SynthesisSettings::sigma_for(int agent) const {
  for (const auto& o : overrides) {
    if (o.agent == agent && o.sigma) return *o.sigma;
  }
  return sigma;
}

Matrix matrix_from_json(const json& value, const std::string& path) {
  if (!value.is_array() || value.empty()) config_error(path, "expected a non-empty array of rows");
  const std::size_t rows = value.size();
  if (!value[0].is_array()) config_error(index(path, 0), "expected a row array");
  const std::size_t cols = value[0].size();
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = value[i];
    if (!row.is_array() || row.size() != cols) {
      config_error(index(path, i), "rows must all have " + std::to_string(cols) + " entries");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          number(row[j], index(index(path, i), j));
    }
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

NetworkSpec parse_spec(const json& doc) {
  NetworkSpec spec;
  if (!doc.is_object()) config_error("<root>", "expected an object");

  const json& agents = require(doc, "agents", "");
  if (!agents.is_array() || agents.empty()) config_error("agents", "expected a non-empty array");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    spec.agents.push_back(agent_from_json(agents[i], index("agents", i), i));
  }

  const json& exo = require(doc, "exosystem", "");
  spec.exosystem.S = matrix_from_json(require(exo, "S", "exosystem"), "exosystem.S");
  spec.exosystem.R = matrix_from_json(require(exo, "R", "exosystem"), "exosystem.R");

  const json& graph = require(doc, "graph", "");
  const json& nodes = require(graph, "nodes", "graph");
  if (!nodes.is_number_integer()) config_error("graph.nodes", "expected an integer");
  spec.node_count = nodes.get<int>();
  if (spec.node_count != static_cast<int>(spec.agents.size())) {
    config_error("graph.nodes", "must equal the number of agents (" +
                                    std::to_string(spec.agents.size()) + ")");
  }
  const json& edges = require(graph, "edges", "graph");
  if (!edges.is_array()) config_error("graph.edges", "expected an array of [i, j, weight]");
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::string p = index("graph.edges", k);
    const json& e = edges[k];
    if (!e.is_array() || e.size() < 2 || e.size() > 3 || !e[0].is_number_integer() ||
        !e[1].is_number_integer()) {
      config_error(p, "expected [i, j] or [i, j, weight] with integer node labels");
    }
    WeightedEdge edge{e[0].get<int>(), e[1].get<int>(), 1.0};
    if (e.size() == 3) edge.weight = number(e[2], index(p, 2));
    if (edge.i < 1 || edge.i > spec.node_count || edge.j < 1 || edge.j > spec.node_count) {
      config_error(p, "node label outside 1.." + std::to_string(spec.node_count));
    }
    spec.edges.push_back(edge);
  }

  if (const auto it = doc.find("synthesis"); it != doc.end()) {
    const json& s = *it;
    if (!s.is_object()) config_error("synthesis", "expected an object");
    spec.synthesis.gamma = optional_positive(s, "gamma", "synthesis");
    spec.synthesis.epsilon = optional_positive(s, "epsilon", "synthesis").value_or(kDefaultEpsilon);
    spec.synthesis.sigma = optional_positive(s, "sigma", "synthesis").value_or(kDefaultSigma);
    if (const auto sl = s.find("slack"); sl != s.end()) {
      spec.synthesis.slack = number(*sl, "synthesis.slack");
      if (!(spec.synthesis.slack > 0.0 && spec.synthesis.slack <= 1.0)) {
        config_error("synthesis.slack", "must lie in (0, 1]");
      }
    }
    if (const auto ov = s.find("overrides"); ov != s.end()) {
      if (!ov->is_array()) config_error("synthesis.overrides", "expected an array");
      for (std::size_t i = 0; i < ov->size(); ++i) {
        const std::string p = index("synthesis.overrides", i);
        const json& o = (*ov)[i];
        const json& agent = require(o, "agent", p);
        if (!agent.is_number_integer() || agent.get<int>() < 1 ||
            agent.get<int>() > static_cast<int>(spec.agents.size())) {
          config_error(child(p, "agent"),
                       "agent index outside 1.." + std::to_string(spec.agents.size()));
        }
        spec.synthesis.overrides.push_back(
            {agent.get<int>(), optional_positive(o, "epsilon", p), optional_positive(o, "sigma", p)});
      }
    }
  }

  if (const auto it = doc.find("simulation"); it != doc.end() && !it->is_null()) {
    const json& s = *it;
    SimulationSettings sim;
    sim.config.t_final = positive(require(s, "t_final", "simulation"), "simulation.t_final");
    sim.config.dt = positive(require(s, "dt", "simulation"), "simulation.dt");
    if (const auto tol = s.find("tolerance"); tol != s.end()) {
      sim.tolerance = positive(*tol, "simulation.tolerance");
    }
    sim.config.x0 = vectors_from_json(s, "x0", "simulation");
    sim.config.w0 = vectors_from_json(s, "w0", "simulation");
    sim.config.v0 = vectors_from_json(s, "v0", "simulation");
    if (const auto d = s.find("disturbance"); d != s.end()) {
      sim.config.disturbance = disturbance_from_json(*d, "simulation.disturbance");
    }
    spec.simulation = std::move(sim);
  }
  return spec;
}

NetworkSpec parse_spec_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::Config, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_spec(doc);
}

NetworkSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec_text(buf.str());
}

}  // namespace hetsync
