#include "fmcalc/errors.hpp"

namespace fmcalc {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::HypothesisViolation: return "HypothesisViolation";
    case ErrorKind::NonIntegralE: return "NonIntegralE";
    case ErrorKind::TagMismatch: return "TagMismatch";
    case ErrorKind::TemplateMismatch: return "TemplateMismatch";
    case ErrorKind::InconsistentSystem: return "InconsistentSystem";
    case ErrorKind::TorsionTransform: return "TorsionTransform";
    case ErrorKind::UndefinedReduction: return "UndefinedReduction";
    case ErrorKind::ZeroDenominator: return "ZeroDenominator";
    case ErrorKind::NotDefinite: return "NotDefinite";
    case ErrorKind::GradingError: return "GradingError";
    case ErrorKind::MissingPushforwardTable: return "MissingPushforwardTable";
    case ErrorKind::MissingTemplate: return "MissingTemplate";
    case ErrorKind::InvalidRank: return "InvalidRank";
    case ErrorKind::Overflow: return "Overflow";
  }
  return "Error";
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse:
      return 1;
    case ErrorKind::HypothesisViolation:
    case ErrorKind::NonIntegralE:
    case ErrorKind::TagMismatch:
    case ErrorKind::TemplateMismatch:
    case ErrorKind::InconsistentSystem:
    case ErrorKind::MissingPushforwardTable:
    case ErrorKind::MissingTemplate:
    case ErrorKind::InvalidRank:
      return 2;
    case ErrorKind::TorsionTransform:
    case ErrorKind::UndefinedReduction:
    case ErrorKind::ZeroDenominator:
    case ErrorKind::NotDefinite:
    case ErrorKind::GradingError:
    case ErrorKind::Overflow:
      return 3;
  }
  return 1;
}

}  // namespace fmcalc
