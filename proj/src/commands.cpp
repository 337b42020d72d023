#include "hetsync/commands.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "hetsync/pipeline.hpp"
#include "hetsync/simulator.hpp"

namespace hetsync {

using json = nlohmann::json;

namespace {

std::string fixed(double value, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

std::string sci(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3e", value);
  return buf;
}

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  }
}

void apply_overrides(NetworkSpec& spec, const CommandOptions& opts) {
  if (opts.epsilon) {
    if (!(*opts.epsilon > 0.0)) throw Error(Errc::Config, "--epsilon must be positive");
    spec.synthesis.epsilon = *opts.epsilon;
  }
  if (opts.sigma) {
    if (!(*opts.sigma > 0.0)) throw Error(Errc::Config, "--sigma must be positive");
    spec.synthesis.sigma = *opts.sigma;
  }
  if (opts.gamma) {
    if (!(*opts.gamma > 0.0)) throw Error(Errc::Config, "--gamma must be positive");
    spec.synthesis.gamma = *opts.gamma;
  }
}

NetworkSpec load_for(const CommandOptions& opts) {
  if (!opts.config) throw Error(Errc::Config, "a --config file is required");
  NetworkSpec spec = load_spec(*opts.config);
  apply_overrides(spec, opts);
  return spec;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::Io, "cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw Error(Errc::Io, "failed writing " + path.string());
}

json findings_json(const ValidationReport& r) {
  json out = json::array();
  for (const auto& f : r.findings) {
    out.push_back({{"check", f.check}, {"pass", f.pass}, {"residual", f.residual}, {"detail", f.detail}});
  }
  return out;
}

json graph_json(const CommGraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({e.i, e.j, e.weight});
  json eig = json::array();
  for (Eigen::Index i = 0; i < g.eigenvalues().size(); ++i) eig.push_back(g.eigenvalues()(i));
  return {{"nodes", g.node_count()}, {"edges", edges}, {"laplacian_eigenvalues", eig},
          {"lambda_max", g.lambda_max()}};
}

json design_json(const Design& d) {
  json agents = json::array();
  for (std::size_t i = 0; i < d.gains.size(); ++i) {
    const auto& k = d.gains[i];
    const auto& reg = d.regulators[i];
    agents.push_back({{"index", i + 1},
                      {"label", d.spec.agents[i].label},
                      {"epsilon", k.epsilon},
                      {"sigma", k.sigma},
                      {"F", matrix_to_json(k.F)},
                      {"G", matrix_to_json(k.G)},
                      {"P", matrix_to_json(k.P)},
                      {"Q", matrix_to_json(k.Q)},
                      {"Pi", matrix_to_json(reg.Pi)},
                      {"Gamma", matrix_to_json(reg.Gamma)},
                      {"regulator_residuals", {reg.residual_state, reg.residual_output}},
                      {"S", k.bound_term},
                      {"validation", findings_json(d.agent_reports[i])}});
  }
  return {{"graph", graph_json(d.graph)},
          {"exosystem_validation", findings_json(d.exosystem_report)},
          {"agents", agents}};
}

json suggestion_json(const GammaSuggestion& s, double slack) {
  return {{"gamma", s.gamma}, {"slack", slack}, {"boundary", s.boundary}};
}

json verdict_json(const FeasibilityVerdict& v, double gamma) {
  return {{"gamma", gamma},
          {"threshold", v.threshold},
          {"feasible", v.feasible},
          {"margins", v.margins},
          {"violating_agents", v.violating}};
}

json chain_json(const ChainReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"relation", c.relation}, {"lhs", c.lhs}, {"rhs", c.rhs},
                      {"holds", c.holds}});
  }
  const ChainCheck* first = r.first_failure();
  return {{"gamma", r.gamma},
          {"N", r.agent_count},
          {"lambda_max", r.lambda_max},
          {"per_agent_threshold", r.per_agent_threshold},
          {"aggregate_threshold", r.aggregate_threshold},
          {"J", r.cost.J},
          {"J_i", r.cost.J_i},
          {"sum_J_i", r.cost.sum_J_i()},
          {"S_i", r.bound_terms},
          {"checks", checks},
          {"first_failure", first ? json(first->name) : json(nullptr)}};
}

json metrics_json(const SyncMetrics& m, double tol) {
  return {{"final_z_gap", m.final_z_gap()},
          {"final_v_disagreement", m.final_v_disagreement()},
          {"final_observer_error", m.final_observer_error()},
          {"tolerance", tol},
          {"synchronized", m.synchronized(tol)}};
}

void emit(const CommandOptions& opts, const json& report, std::ostream& out,
          const std::function<void()>& text) {
  if (opts.out) write_file(*opts.out, report.dump(2) + "\n");
  if (opts.json) {
    out << report.dump(2) << "\n";
  } else {
    text();
  }
}

void print_chain(std::ostream& out, const ChainReport& r) {
  out << "H2 cost J = " << fixed(r.cost.J) << "  (gamma = " << fixed(r.gamma, 4)
      << ", lambda_N = " << fixed(r.lambda_max, 4) << ")\n";
  for (std::size_t i = 0; i < r.cost.J_i.size(); ++i) {
    out << "  agent " << i + 1 << ": J_i = " << fixed(r.cost.J_i[i]) << "  S_i = "
        << fixed(r.bound_terms[i]) << "\n";
  }
  out << "  sum J_i = " << fixed(r.cost.sum_J_i()) << "\n";
  for (const auto& c : r.checks) {
    out << "  [" << (c.holds ? "ok  " : "FAIL") << "] " << c.relation << ": " << fixed(c.lhs)
        << " vs " << fixed(c.rhs) << "\n";
  }
  if (const ChainCheck* f = r.first_failure()) out << "first failing check: " << f->name << "\n";
}

std::filesystem::path metrics_path_for(const std::filesystem::path& csv) {
  std::filesystem::path p = csv;
  p.replace_extension(".metrics.json");
  return p;
}

// Published six-agent cycle results, agents 4-6 repeat agents 1-3.
struct PublishedExample {
  static constexpr double lambda_max = 4.0;
  static constexpr double gamma = 18.0;
  static constexpr double threshold = 0.75;
  static constexpr std::array<std::array<double, 3>, 3> F{{{-1.0005, -1.7329, -0.7326},
                                                          {-1.0005, -1.2345, -0.4951},
                                                          {-1.0005, -1.0327, -0.3982}}};
  static constexpr std::array<std::array<double, 3>, 3> G{{{0.3290, 0.0341, 0.0028},
                                                          {0.2804, 0.0193, 0.0007},
                                                          {0.2578, 0.0132, 0.0002}}};
  static constexpr std::array<double, 3> S{0.6621, 0.4379, 0.3637};
};

constexpr double kGainTol = 5e-4;
constexpr double kBoundTermTol = 1e-3;
constexpr double kRegulatorTol = 1e-8;
constexpr double kSpectrumTol = 1e-10;
constexpr double kStrictMargin = 1e-6;

struct Row {
  std::string quantity;
  double published = 0.0;
  double computed = 0.0;
  double tolerance = 0.0;
  bool is_bound = false;  ///< computed must stay below published by the margin

  bool pass() const {
    if (is_bound) return published - computed > tolerance;
    return std::abs(computed - published) <= tolerance;
  }
};

}  // namespace

int cmd_synthesize(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const NetworkSpec spec = load_for(opts);
    const Design d = design_protocol(spec);
    const double slack = spec.synthesis.slack;
    const GammaSuggestion suggestion = suggest_gamma(d.bound_terms(), d.graph, slack);

    json report = design_json(d);
    report["command"] = "synthesize";
    report["suggested_gamma"] = suggestion_json(suggestion, slack);
    int code = kExitOk;
    std::optional<FeasibilityVerdict> verdict;
    if (spec.synthesis.gamma) {
      verdict = check_feasibility(d.gains, d.graph, *spec.synthesis.gamma);
      report["feasibility"] = verdict_json(*verdict, *spec.synthesis.gamma);
      if (!verdict->feasible) code = kExitAssertion;
    } else {
      report["feasibility"] = nullptr;
    }

    emit(opts, report, out, [&] {
      out << "lambda_N = " << fixed(d.graph.lambda_max(), 6) << "\n";
      for (std::size_t i = 0; i < d.gains.size(); ++i) {
        const auto& k = d.gains[i];
        out << "agent " << i + 1 << " (" << spec.agents[i].label << "): S_i = " << fixed(k.bound_term)
            << "\n  F = " << k.F.format(Eigen::IOFormat(6, 0, ", ", "; ", "", "", "[", "]"))
            << "\n  G = " << k.G.transpose().format(Eigen::IOFormat(6, 0, ", ", "; ", "", "", "[", "]"))
            << "^T\n";
      }
      out << "suggested gamma = " << fixed(suggestion.gamma) << " (slack " << slack << ")\n";
      if (verdict) {
        out << "gamma = " << *spec.synthesis.gamma << ", threshold gamma/(N lambda_N) = "
            << fixed(verdict->threshold) << ": " << (verdict->feasible ? "feasible" : "INFEASIBLE")
            << "\n";
        for (int agent : verdict->violating) {
          out << "  agent " << agent << " violates S_i < threshold (S_i = "
              << fixed(d.gains[static_cast<std::size_t>(agent - 1)].bound_term) << ")\n";
        }
      }
    });
    return code;
  });
}

int cmd_verify(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const NetworkSpec spec = load_for(opts);
    const Design d = design_protocol(spec);
    const GammaSuggestion suggestion = suggest_gamma(d.bound_terms(), d.graph, spec.synthesis.slack);
    const double gamma = spec.synthesis.gamma.value_or(suggestion.gamma);
    const ClosedLoopNetwork net = assemble(d);
    const ChainReport chain = verify_chain(net, d.gains, gamma);

    json report = design_json(d);
    report["command"] = "verify";
    report["gamma_source"] = spec.synthesis.gamma ? "config" : "suggested";
    report["chain"] = chain_json(chain);
    emit(opts, report, out, [&] { print_chain(out, chain); });
    return chain.cost_below_gamma() ? kExitOk : kExitAssertion;
  });
}

int cmd_simulate(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const NetworkSpec spec = load_for(opts);
    if (!spec.simulation) throw Error(Errc::Config, "config field 'simulation': missing required field");
    const Design d = design_protocol(spec);
    const ClosedLoopNetwork net = assemble(d);
    const Trajectory traj = simulate(net, spec.simulation->config);
    for (const auto& w : traj.warnings) err << "warning: " << w << "\n";
    const SyncMetrics metrics = sync_metrics(traj, net);
    const double tol = spec.simulation->tolerance;

    const std::filesystem::path csv_path = opts.out.value_or("trajectory.csv");
    std::ostringstream csv;
    write_trajectory_csv(csv, traj, metrics, net);
    write_file(csv_path, csv.str());
    json summary = metrics_json(metrics, tol);
    summary["trajectory_csv"] = csv_path.string();
    summary["samples"] = traj.size();
    summary["warnings"] = traj.warnings;
    write_file(metrics_path_for(csv_path), summary.dump(2) + "\n");

    if (opts.json) {
      out << summary.dump(2) << "\n";
    } else {
      out << "final z gap          = " << sci(metrics.final_z_gap()) << "\n"
          << "final v disagreement = " << sci(metrics.final_v_disagreement()) << "\n"
          << "final observer error = " << sci(metrics.final_observer_error()) << "\n"
          << (metrics.synchronized(tol) ? "synchronized" : "NOT synchronized") << " (tolerance "
          << tol << ")\n"
          << "trajectory written to " << csv_path.string() << "\n";
    }
    return metrics.synchronized(tol) ? kExitOk : kExitAssertion;
  });
}

int cmd_reproduce_paper(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    NetworkSpec spec = parse_spec_text(bundled_example_spec());
    apply_overrides(spec, opts);
    const Design d = design_protocol(spec);
    const ClosedLoopNetwork net = assemble(d);
    const double gamma = spec.synthesis.gamma.value_or(PublishedExample::gamma);
    const ChainReport chain = verify_chain(net, d.gains, gamma);
    const Trajectory traj = simulate(net, spec.simulation->config);
    const SyncMetrics metrics = sync_metrics(traj, net);
    const double sync_tol = spec.simulation->tolerance;

    std::vector<Row> rows;
    rows.push_back({"lambda_N", PublishedExample::lambda_max, d.graph.lambda_max(), kSpectrumTol});
    for (std::size_t i = 0; i < d.gains.size(); ++i) {
      const std::size_t family = i % 3;
      const std::string agent = std::to_string(i + 1);
      for (Eigen::Index k = 0; k < 3; ++k) {
        rows.push_back({"F_" + agent + "[" + std::to_string(k + 1) + "]",
                        PublishedExample::F[family][static_cast<std::size_t>(k)], d.gains[i].F(0, k),
                        kGainTol});
      }
      for (Eigen::Index k = 0; k < 3; ++k) {
        rows.push_back({"G_" + agent + "[" + std::to_string(k + 1) + "]",
                        PublishedExample::G[family][static_cast<std::size_t>(k)], d.gains[i].G(k, 0),
                        kGainTol});
      }
    }
    for (std::size_t i = 0; i < d.gains.size(); ++i) {
      rows.push_back({"S_" + std::to_string(i + 1), PublishedExample::S[i % 3], d.gains[i].bound_term,
                      kBoundTermTol});
    }
    const double threshold = gamma / (d.graph.node_count() * d.graph.lambda_max());
    rows.push_back({"gamma/(N*lambda_N)", PublishedExample::threshold, threshold, kSpectrumTol});
    for (std::size_t i = 0; i < d.gains.size(); ++i) {
      rows.push_back({"S_" + std::to_string(i + 1) + " < threshold", threshold,
                      d.gains[i].bound_term, 0.0, true});
    }
    linalg::Matrix pi_ref(3, 2);
    pi_ref << 1, 0, 0, 1, 0, 0;
    linalg::Matrix gamma_ref(1, 2);
    gamma_ref << 0, 1;
    for (std::size_t i = 0; i < d.regulators.size(); ++i) {
      const auto& reg = d.regulators[i];
      const bool fits = reg.Pi.rows() == 3 && reg.Pi.cols() == 2 && reg.Gamma.rows() == 1;
      rows.push_back({"|Pi_" + std::to_string(i + 1) + " - ref|max", 0.0,
                      fits ? (reg.Pi - pi_ref).cwiseAbs().maxCoeff() : INFINITY, kRegulatorTol});
      rows.push_back({"|Gamma_" + std::to_string(i + 1) + " - ref|max", 0.0,
                      fits ? (reg.Gamma - gamma_ref).cwiseAbs().maxCoeff() : INFINITY,
                      kRegulatorTol});
    }
    const double chain_rhs = chain.lambda_max * chain.cost.sum_J_i();
    rows.push_back({"J <= lambda_N*sum J_i", chain_rhs, chain.cost.J, kStrictMargin, true});
    rows.push_back({"lambda_N*sum J_i < gamma", gamma, chain_rhs, kStrictMargin, true});
    rows.push_back({"final z gap", sync_tol, metrics.final_z_gap(), 0.0, true});
    rows.push_back({"final v disagreement", sync_tol, metrics.final_v_disagreement(), 0.0, true});
    rows.push_back({"final observer error", sync_tol, metrics.final_observer_error(), 0.0, true});

    bool all_pass = true;
    json jrows = json::array();
    for (const auto& r : rows) {
      all_pass = all_pass && r.pass();
      jrows.push_back({{"quantity", r.quantity}, {"published", r.published}, {"computed", r.computed},
                       {"tolerance", r.tolerance}, {"kind", r.is_bound ? "upper_bound" : "match"},
                       {"pass", r.pass()}});
    }
    json report = design_json(d);
    report["command"] = "reproduce-paper";
    report["rows"] = jrows;
    report["chain"] = chain_json(chain);
    report["simulation"] = metrics_json(metrics, sync_tol);
    report["pass"] = all_pass;

    emit(opts, report, out, [&] {
      char line[160];
      std::snprintf(line, sizeof(line), "%-28s %14s %14s %10s  %s\n", "quantity", "published",
                    "computed", "tolerance", "result");
      out << line;
      for (const auto& r : rows) {
        std::snprintf(line, sizeof(line), "%-28s %14s %14s %10s  %s\n", r.quantity.c_str(),
                      fixed(r.published).c_str(), fixed(r.computed).c_str(), sci(r.tolerance).c_str(),
                      r.pass() ? "pass" : "FAIL");
        out << line;
      }
      out << "J = " << fixed(chain.cost.J) << ", sum J_i = " << fixed(chain.cost.sum_J_i()) << "\n";
      out << (all_pass ? "all rows pass" : "some rows FAIL") << "\n";
    });
    if (!all_pass) {
      for (const auto& r : rows) {
        if (!r.pass()) err << "mismatch: " << r.quantity << "\n";
      }
    }
    return all_pass ? kExitOk : kExitAssertion;
  });
}

}  // namespace hetsync
