#pragma once

#include <stdexcept>
#include <string>

namespace baire {

// Malformed input or a structural precondition that the caller violated.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& message, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

// A bounded search ran out of steps. Never treated as a proof of absence.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A certificate failed an independent recount or re-evaluation.
class CertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Internal invariant violation (non-canonical representative, conflicting commitment, ...).
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A read-only conjugator was asked for a value that was never committed.
class UncommittedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace baire
