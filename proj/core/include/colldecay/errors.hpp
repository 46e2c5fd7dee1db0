#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace colldecay {

enum class ErrorCode {
  // network
  EmptyNetwork,
  NegativeRate,
  AsymmetricCoupling,
  NonzeroSelfCoupling,
  SharedLocalContinuum,
  NonfiniteParameter,
  ShapeMismatch,
  // solve
  DefectiveMatrix,
  StepTooLarge,
  NonfiniteState,
  NoUniqueSteadyState,
  NegativePopulation,
  WeakFieldViolation,
  // spectral / kernel
  NotApplicable,
  WrongContinuumCount,
  // oracle
  EmptyContinuum,
  BandwidthTooSmall,
  RecurrenceHorizonExceeded,
  // observables
  MissingChannel,
  NotDegenerate,
  // cli
  UnknownFigure,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above; the
/// CLI maps them onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace colldecay
