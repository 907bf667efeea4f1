#include "torsion/error.hpp"

namespace torsion {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NotFundamental: return "NotFundamental";
    case Errc::NotCubefree: return "NotCubefree";
    case Errc::NotPrimitive: return "NotPrimitive";
    case Errc::FactorizationTooLarge: return "FactorizationTooLarge";
    case Errc::ModulusTooLarge: return "ModulusTooLarge";
    case Errc::RangeOrder: return "RangeOrder";
    case Errc::MixedSquarefullClass: return "MixedSquarefullClass";
    case Errc::EmptySample: return "EmptySample";
    case Errc::PoleAtOne: return "PoleAtOne";
    case Errc::PoleInRegion: return "PoleInRegion";
    case Errc::NearZeroOrPole: return "NearZeroOrPole";
    case Errc::PrecisionBudgetExceeded: return "PrecisionBudgetExceeded";
    case Errc::DegenerateRegion: return "DegenerateRegion";
    case Errc::BoundaryZeroSuspected: return "BoundaryZeroSuspected";
    case Errc::ResolutionExhausted: return "ResolutionExhausted";
    case Errc::Infeasible: return "Infeasible";
    case Errc::CapTooSmall: return "CapTooSmall";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::QuadratureBudget: return "QuadratureBudget";
    case Errc::ZeroCensus: return "ZeroCensus";
    case Errc::ConstraintViolated: return "ConstraintViolated";
    case Errc::ParseError: return "ParseError";
    case Errc::DuplicateDiscriminant: return "DuplicateDiscriminant";
    case Errc::IOError: return "IOError";
    case Errc::VersionMismatch: return "VersionMismatch";
  }
  return "Unknown";
}

ErrorClass error_class(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument:
    case Errc::DegenerateRegion:
      return ErrorClass::Usage;
    case Errc::NotFundamental:
    case Errc::NotCubefree:
    case Errc::NotPrimitive:
    case Errc::RangeOrder:
    case Errc::MixedSquarefullClass:
    case Errc::EmptySample:
    case Errc::PoleAtOne:
    case Errc::PoleInRegion:
    case Errc::Infeasible:
    case Errc::ZeroCensus:
    case Errc::ConstraintViolated:
    case Errc::CapExceeded:
      return ErrorClass::Constraint;
    case Errc::ParseError:
    case Errc::DuplicateDiscriminant:
    case Errc::IOError:
    case Errc::VersionMismatch:
      return ErrorClass::Data;
    case Errc::FactorizationTooLarge:
    case Errc::ModulusTooLarge:
    case Errc::NearZeroOrPole:
    case Errc::PrecisionBudgetExceeded:
    case Errc::BoundaryZeroSuspected:
    case Errc::ResolutionExhausted:
    case Errc::CapTooSmall:
    case Errc::QuadratureBudget:
      return ErrorClass::Numeric;
  }
  return ErrorClass::Usage;
}

}  // namespace torsion
