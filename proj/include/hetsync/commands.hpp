#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace hetsync {

struct CommandOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> out;
  bool json = false;
  std::optional<double> epsilon;
  std::optional<double> sigma;
  std::optional<double> gamma;
};

// Each command returns its process exit code: 0 success, 1 a checked
// assertion failed, 2 validation, 3 solver, 4 I/O.
int cmd_synthesize(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_verify(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_simulate(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_reproduce_paper(const CommandOptions& opts, std::ostream& out, std::ostream& err);

/// JSON text of the six-agent cycle example shipped with the tool.
const std::string& bundled_example_spec();

}  // namespace hetsync
