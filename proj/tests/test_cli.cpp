#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hetsync/commands.hpp"
#include "hetsync/config.hpp"
#include "hetsync/pipeline.hpp"

using namespace hetsync;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("hetsync_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }

  fs::path write(const std::string& name, const std::string& text) const {
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p;
  }
};

const Scratch& scratch() {
  static const Scratch s;
  return s;
}

json example() { return json::parse(bundled_example_spec()); }

fs::path config_file(const json& doc, const std::string& name) { return scratch().write(name, doc.dump()); }

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

template <class Cmd>
Run run(Cmd cmd, CommandOptions opts) {
  std::ostringstream out, err;
  Run r;
  r.code = cmd(opts, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

CommandOptions with_config(const fs::path& p) {
  CommandOptions o;
  o.config = p;
  return o;
}

std::string config_error(const json& doc) {
  try {
    parse_spec(doc);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::Config);
    return e.what();
  }
  FAIL("expected a config error");
  return {};
}

int exe(const std::string& args) {
  const std::string cmd = std::string(HETSYNC_EXE) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("config errors name the offending field") {
  json doc = example();
  doc["agents"][2].erase("C1");
  CHECK(config_error(doc).find("'agents[2].C1'") != std::string::npos);

  doc = example();
  doc["agents"][0]["A"][1] = json::array({0, 1});
  CHECK(config_error(doc).find("'agents[0].A[1]'") != std::string::npos);

  doc = example();
  doc["graph"]["edges"][3] = json::array({1, 9, 1});
  CHECK(config_error(doc).find("'graph.edges[3]'") != std::string::npos);

  doc = example();
  doc["synthesis"]["epsilon"] = -1;
  CHECK(config_error(doc).find("'synthesis.epsilon'") != std::string::npos);

  doc = example();
  doc["graph"]["nodes"] = 5;
  CHECK(config_error(doc).find("'graph.nodes'") != std::string::npos);

  doc = example();
  doc["simulation"]["disturbance"] = {{"type", "burst"}};
  CHECK(config_error(doc).find("'simulation.disturbance.type'") != std::string::npos);

  CHECK_THROWS_AS(parse_spec_text("{not json"), Error);
}

TEST_CASE("config round trip keeps the example intact") {
  const NetworkSpec spec = parse_spec(example());
  CHECK(spec.agents.size() == 6);
  CHECK(spec.node_count == 6);
  CHECK(spec.edges.size() == 6);
  CHECK(spec.synthesis.gamma == 18.0);
  REQUIRE(spec.simulation.has_value());
  CHECK(spec.simulation->config.x0.size() == 6);
  CHECK(matrix_from_json(matrix_to_json(spec.agents[1].A), "A") == spec.agents[1].A);

  json doc = example();
  doc["synthesis"]["overrides"] = json::array({{{"agent", 2}, {"epsilon", 0.01}}});
  const NetworkSpec o = parse_spec(doc);
  CHECK(o.synthesis.epsilon_for(2) == 0.01);
  CHECK(o.synthesis.epsilon_for(1) == spec.synthesis.epsilon);
  CHECK(o.synthesis.sigma_for(2) == spec.synthesis.sigma);
}

TEST_CASE("synthesize reports feasibility") {
  const fs::path cfg = config_file(example(), "cycle.json");
  const Run ok = run(cmd_synthesize, with_config(cfg));
  CHECK(ok.code == 0);
  CHECK(ok.out.find("feasible") != std::string::npos);

  CommandOptions tight = with_config(cfg);
  tight.gamma = 15.0;
  tight.json = true;
  const Run bad = run(cmd_synthesize, tight);
  CHECK(bad.code == 1);
  const json report = json::parse(bad.out);
  CHECK(report["feasibility"]["feasible"] == false);
  CHECK(report["feasibility"]["threshold"].get<double>() == doctest::Approx(0.625));
  CHECK(report["feasibility"]["violating_agents"] == json::array({1, 4}));

  json no_gamma = example();
  no_gamma["synthesis"].erase("gamma");
  CommandOptions free = with_config(config_file(no_gamma, "free.json"));
  free.json = true;
  const Run suggested = run(cmd_synthesize, free);
  CHECK(suggested.code == 0);
  const json s = json::parse(suggested.out);
  CHECK(s["feasibility"].is_null());
  CHECK(std::abs(s["suggested_gamma"]["gamma"].get<double>() - 17.88) < 0.01);
}

TEST_CASE("validation failures exit 2 and name the eigenvalue") {
  json doc = example();
  doc["agents"][1]["A"][0][0] = 0.5;
  doc["agents"][1]["C1"] = json::array({json::array({0, 0, 1})});
  const Run r = run(cmd_synthesize, with_config(config_file(doc, "undetectable.json")));
  CHECK(r.code == 2);
  CHECK(r.err.find("agent 2") != std::string::npos);
  CHECK(r.err.find("detectable(C1,A)") != std::string::npos);
  CHECK(r.err.find("eigenvalue 0.5") != std::string::npos);
}

TEST_CASE("verify checks J against gamma") {
  const fs::path cfg = config_file(example(), "cycle_verify.json");
  CommandOptions o = with_config(cfg);
  o.json = true;
  const Run ok = run(cmd_verify, o);
  CHECK(ok.code == 0);
  const json report = json::parse(ok.out);
  CHECK(report["gamma_source"] == "config");
  CHECK(report["chain"]["first_failure"].is_null());
  CHECK(report["chain"]["J"].get<double>() < 18.0);

  o.gamma = 0.001;
  const Run bad = run(cmd_verify, o);
  CHECK(bad.code == 1);
  CHECK(json::parse(bad.out)["chain"]["first_failure"] == "theorem_condition");

  json complete = example();
  complete["graph"]["edges"] = json::array();
  for (int i = 1; i <= 6; ++i)
    for (int j = i + 1; j <= 6; ++j) complete["graph"]["edges"].push_back({i, j, 1});
  CommandOptions k6 = with_config(config_file(complete, "k6.json"));
  k6.json = true;
  const Run kr = run(cmd_verify, k6);
  CHECK(json::parse(kr.out)["chain"]["lambda_max"].get<double>() == doctest::Approx(6.0));
}

TEST_CASE("simulate writes the trajectory and metrics") {
  const fs::path cfg = config_file(example(), "cycle_sim.json");
  CommandOptions o = with_config(cfg);
  o.out = scratch().dir / "run.csv";
  const Run r = run(cmd_simulate, o);
  CHECK(r.code == 0);
  CHECK(fs::exists(scratch().dir / "run.csv"));
  const json metrics = json::parse(slurp(scratch().dir / "run.metrics.json"));
  CHECK(metrics["synchronized"] == true);
  CHECK(metrics["samples"] == 3001);

  json shortrun = example();
  shortrun["simulation"]["t_final"] = 0.1;
  CommandOptions s = with_config(config_file(shortrun, "short.json"));
  s.out = scratch().dir / "short.csv";
  CHECK(run(cmd_simulate, s).code == 1);

  json missing = example();
  missing.erase("simulation");
  CommandOptions m = with_config(config_file(missing, "nosim.json"));
  m.out = scratch().dir / "nosim.csv";
  CHECK(run(cmd_simulate, m).code == 2);
}

TEST_CASE("simulate warns about a coarse step") {
  json coarse = example();
  coarse["simulation"]["dt"] = 0.05;
  CommandOptions o = with_config(config_file(coarse, "coarse.json"));
  o.out = scratch().dir / "coarse.csv";
  const Run r = run(cmd_simulate, o);
  CHECK(r.err.find("warning: StepTooLarge") != std::string::npos);
}

TEST_CASE("I/O failures exit 4") {
  CHECK(run(cmd_verify, with_config(scratch().dir / "does_not_exist.json")).code == 4);
  CommandOptions o = with_config(config_file(example(), "io.json"));
  o.out = scratch().dir / "no_such_dir" / "report.json";
  CHECK(run(cmd_synthesize, o).code == 4);
}

TEST_CASE("reproduce-paper table") {
  CommandOptions o;
  o.json = true;
  o.out = scratch().dir / "repro.json";
  const Run r = run(cmd_reproduce_paper, o);
  CHECK(r.code == 0);
  const json report = json::parse(r.out);
  CHECK(report == json::parse(slurp(scratch().dir / "repro.json")));

  CommandOptions loose;
  loose.epsilon = 0.1;
  loose.json = true;
  const Run off = run(cmd_reproduce_paper, loose);
  CHECK(off.code == 1);
  CHECK(off.err.find("mismatch: S_1") != std::string::npos);
  for (const auto& row : json::parse(off.out)["rows"]) {
    const std::string q = row["quantity"];
    if (q.rfind("S_", 0) == 0 && q.find('<') == std::string::npos) {
      CHECK(row["computed"].get<double>() > row["published"].get<double>());
    }
  }
}

TEST_CASE("output is deterministic") {
  const fs::path cfg = config_file(example(), "det.json");
  CommandOptions o = with_config(cfg);
  o.json = true;
  CHECK(run(cmd_verify, o).out == run(cmd_verify, o).out);
  o.out = scratch().dir / "det1.csv";
  run(cmd_simulate, o);
  o.out = scratch().dir / "det2.csv";
  run(cmd_simulate, o);
  CHECK(slurp(scratch().dir / "det1.csv") == slurp(scratch().dir / "det2.csv"));
}

TEST_CASE("executable exit codes") {
  const fs::path cfg = config_file(example(), "exe.json");
  CHECK(exe("synthesize --config " + cfg.string()) == 0);
  CHECK(exe("synthesize --config " + cfg.string() + " --gamma 15") == 1);
  CHECK(exe("verify --config " + (scratch().dir / "absent.json").string()) == 4);
  CHECK(exe("synthesize") == 2);
  CHECK(exe("frobnicate") == 2);
  CHECK(exe("synthesize --config " + cfg.string() + " --gamma notanumber") == 2);
}
