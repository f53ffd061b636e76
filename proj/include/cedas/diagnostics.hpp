#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cedas {

struct SourceLoc {
  int line = 0;
  int col = 0;
};

inline std::string loc_str(SourceLoc loc) {
  return std::to_string(loc.line) + ":" + std::to_string(loc.col);
}

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax, resolution or type error, carrying a source position.
class ParseError : public Error {
 public:
  ParseError(SourceLoc loc, const std::string& msg)
      : Error(loc_str(loc) + ": " + msg), loc_(loc) {}
  SourceLoc where() const { return loc_; }

 private:
  SourceLoc loc_;
};

/// Runtime expression-evaluation failure (division or modulo by zero).
/// Carries the offending expression text and, when known, the evaluation
/// of input variables that triggered it.
class EvalError : public Error {
 public:
  EvalError(const std::string& msg, std::string expr_text,
            std::vector<uint16_t> evaluation = {})
      : Error(msg + " in `" + expr_text + "`"),
        expr_text_(std::move(expr_text)),
        evaluation_(std::move(evaluation)) {}
  const std::string& expr_text() const { return expr_text_; }
  const std::vector<uint16_t>& evaluation() const { return evaluation_; }
  void attach_evaluation(std::vector<uint16_t> ev) { evaluation_ = std::move(ev); }

 private:
  std::string expr_text_;
  std::vector<uint16_t> evaluation_;
};

/// The requested set of evaluations exceeds the configured cap.
class CapacityError : public Error {
 public:
  CapacityError(uint64_t cardinality, uint64_t cap)
      : Error("initial evaluation set has " + std::to_string(cardinality) +
              " members, exceeding the cap of " + std::to_string(cap)),
        cardinality_(cardinality) {}
  uint64_t cardinality() const { return cardinality_; }

 private:
  uint64_t cardinality_ = 0;
};

/// Visited-store byte budget exhausted. Message includes the stats snapshot.
class StoreLimitError : public Error {
 public:
  using Error::Error;
};

/// Model-level verification error: a state with no system successor, or an
/// evaluation error surfacing from a transition.
class VerificationError : public Error {
 public:
  using Error::Error;
};

class TimeoutError : public Error {
 public:
  using Error::Error;
};

struct Diagnostic {
  SourceLoc loc;
  std::string message;
};

}  // namespace cedas
