#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hetsync {

enum class Errc {
  InvalidArgument,
  DimensionMismatch,
  NonFinite,
  NotSymmetric,
  NotHurwitz,
  IllConditioned,
  SpectraOverlap,
  NotStabilizable,
  NoStabilizingSolution,
  ConvergenceFailure,
  SelfLoop,
  DuplicateEdge,
  NonPositiveWeight,
  Disconnected,
  ValidationFailed,
  NoSolution,
  InequalityViolated,
  StepTooLarge,
  Config,
  Io,
};

std::string_view to_string(Errc code) noexcept;

/// Exception carrying a machine-readable category next to the message.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace hetsync
