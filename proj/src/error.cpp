#include "hetsync/error.hpp"

namespace hetsync {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonFinite: return "NonFinite";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::NotHurwitz: return "NotHurwitz";
    case Errc::IllConditioned: return "IllConditioned";
    case Errc::SpectraOverlap: return "SpectraOverlap";
    case Errc::NotStabilizable: return "NotStabilizable";
    case Errc::NoStabilizingSolution: return "NoStabilizingSolution";
    case Errc::ConvergenceFailure: return "ConvergenceFailure";
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::DuplicateEdge: return "DuplicateEdge";
    case Errc::NonPositiveWeight: return "NonPositiveWeight";
    case Errc::Disconnected: return "Disconnected";
    case Errc::ValidationFailed: return "ValidationFailed";
    case Errc::NoSolution: return "NoSolution";
    case Errc::InequalityViolated: return "InequalityViolated";
    case Errc::StepTooLarge: return "StepTooLarge";
    case Errc::Config: return "Config";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace hetsync
