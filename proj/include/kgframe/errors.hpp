#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kgframe {

enum class ErrorKind {
  NotHermitian,
  ConvergenceFailure,
  DimensionMismatch,
  NonFinite,
  RangeNotIncluded,
  NotKGFrame,
  NotADual,
  HypothesisViolated,
  NotAtomicForInputs,
  DegenerateCombination,
  OrthogonalityViolated,
  CommutationViolated,
  NotSurjective,
  NotParseval,
  RangeHypothesisViolated,
  NotPositive,
  RankTooLarge,
  InsufficientCoefficientDim,
  UnknownTheorem,
  InvalidArgument,
  ParseError,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure the library reports. The kind is the stable identifier; the
// message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace kgframe
