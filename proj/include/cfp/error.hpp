#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace cfp {

enum class ErrorCode {
  invalid_input,
  not_a_vertex,
  unsupported_mode,
  invalid_parameter,
  insufficient_samples,
  seed_edge,
  invalid_seed,
  selection_failure,
  hypothesis_violation,
  inapplicable_check,
  parse_error,
  semantic_error,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_input: return "invalid-input";
    case ErrorCode::not_a_vertex: return "not-a-vertex";
    case ErrorCode::unsupported_mode: return "unsupported-mode";
    case ErrorCode::invalid_parameter: return "invalid-parameter";
    case ErrorCode::insufficient_samples: return "insufficient-samples";
    case ErrorCode::seed_edge: return "seed-edge";
    case ErrorCode::invalid_seed: return "invalid-seed";
    case ErrorCode::selection_failure: return "selection-failure";
    case ErrorCode::hypothesis_violation: return "hypothesis-violation";
    case ErrorCode::inapplicable_check: return "inapplicable-check";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::semantic_error: return "semantic-error";
  }
  return "unknown";
}

/// Base exception for every failure raised by the library. The code is
/// stable and is what callers should branch on; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the solvers when a per-step bound or edge assertion fails.
/// `step` is the iteration index n of the offending trace row.
class HypothesisViolation : public Error {
 public:
  HypothesisViolation(std::size_t step, const std::string& what)
      : Error(ErrorCode::hypothesis_violation, what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Text-level error with a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error(ErrorCode::parse_error,
              "line " + std::to_string(line) + ", column " +
                  std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace cfp
