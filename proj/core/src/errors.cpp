#include "colldecay/errors.hpp"

namespace colldecay {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyNetwork: return "EmptyNetwork";
    case ErrorCode::NegativeRate: return "NegativeRate";
    case ErrorCode::AsymmetricCoupling: return "AsymmetricCoupling";
    case ErrorCode::NonzeroSelfCoupling: return "NonzeroSelfCoupling";
    case ErrorCode::SharedLocalContinuum: return "SharedLocalContinuum";
    case ErrorCode::NonfiniteParameter: return "NonfiniteParameter";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::DefectiveMatrix: return "DefectiveMatrix";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::NonfiniteState: return "NonfiniteState";
    case ErrorCode::NoUniqueSteadyState: return "NoUniqueSteadyState";
    case ErrorCode::NegativePopulation: return "NegativePopulation";
    case ErrorCode::WeakFieldViolation: return "WeakFieldViolation";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::WrongContinuumCount: return "WrongContinuumCount";
    case ErrorCode::EmptyContinuum: return "EmptyContinuum";
    case ErrorCode::BandwidthTooSmall: return "BandwidthTooSmall";
    case ErrorCode::RecurrenceHorizonExceeded: return "RecurrenceHorizonExceeded";
    case ErrorCode::MissingChannel: return "MissingChannel";
    case ErrorCode::NotDegenerate: return "NotDegenerate";
    case ErrorCode::UnknownFigure: return "UnknownFigure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace colldecay
