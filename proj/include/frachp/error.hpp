#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace frachp {

enum class Errc {
  NonPositiveStep,
  ZeroSteps,
  GridReachesSingularity,
  InvalidOrder,
  InvalidValue,
  NonPositiveArgument,
  KernelSingularity,
  IndivisibleFactor,
  GridMismatch,
  BadChannel,
  DimensionMismatch,
  NegativeRate,
  SingularHessian,
  NoConvergence,
  NotPositiveDefinite,
  NoiseShapeUnsupported,
  NumericalBlowup,
  NotApplicable,
  BoundaryViolation,
  DegenerateInput,
  UnknownKey,
  MissingKey,
  ParseError,
  Io,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library. `step()` is set for errors that
/// originate inside a time-stepping loop.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, std::optional<std::size_t> step = std::nullopt);

  Errc code() const noexcept { return code_; }
  std::optional<std::size_t> step() const noexcept { return step_; }

 private:
  Errc code_;
  std::optional<std::size_t> step_;
};

}  // namespace frachp
