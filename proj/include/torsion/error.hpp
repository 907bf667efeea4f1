#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace torsion {

enum class Errc {
  InvalidArgument,
  NotFundamental,
  NotCubefree,
  NotPrimitive,
  FactorizationTooLarge,
  ModulusTooLarge,
  RangeOrder,
  MixedSquarefullClass,
  EmptySample,
  PoleAtOne,
  PoleInRegion,
  NearZeroOrPole,
  PrecisionBudgetExceeded,
  DegenerateRegion,
  BoundaryZeroSuspected,
  ResolutionExhausted,
  Infeasible,
  CapTooSmall,
  CapExceeded,
  QuadratureBudget,
  ZeroCensus,
  ConstraintViolated,
  ParseError,
  DuplicateDiscriminant,
  IOError,
  VersionMismatch,
};

std::string_view errc_name(Errc code) noexcept;

/// Broad failure class; the CLI maps these onto process exit codes.
enum class ErrorClass { Usage, Constraint, Data, Numeric };

ErrorClass error_class(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace torsion
