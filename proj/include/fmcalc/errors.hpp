#pragma once

#include <stdexcept>
#include <string>

namespace fmcalc {

// Every failure carries a kind; the CLI maps kinds onto exit codes.
enum class ErrorKind {
  Parse,                // malformed input or config (exit 1)
  HypothesisViolation,  // inputs violate a standing hypothesis (exit 2)
  NonIntegralE,
  TagMismatch,
  TemplateMismatch,
  InconsistentSystem,
  TorsionTransform,     // degenerate mathematical case (exit 3)
  UndefinedReduction,
  ZeroDenominator,
  NotDefinite,
  GradingError,
  MissingPushforwardTable,
  MissingTemplate,
  InvalidRank,
  Overflow,
};

const char* to_string(ErrorKind kind);
int exit_code_for(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

}  // namespace fmcalc
