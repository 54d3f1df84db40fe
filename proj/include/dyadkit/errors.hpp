#pragma once

#include <stdexcept>
#include <string>

namespace dyadkit {

// Every library failure carries the process exit code the CLI reports for it.
class Error : public std::runtime_error {
 public:
  Error(const std::string& what, int exit_code)
      : std::runtime_error(what), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

// Precondition or schema violation.
class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& what) : Error(what, 2) {}
};

// A requested computation exceeds the configured size guard.
class BudgetError : public Error {
 public:
  explicit BudgetError(const std::string& what) : Error(what, 3) {}
};

// An internal invariant failed; `invariant()` names it.
class InvariantError : public Error {
 public:
  InvariantError(std::string invariant, const std::string& detail)
      : Error("invariant violated: " + invariant + ": " + detail, 4),
        invariant_(std::move(invariant)) {}
  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what, 5) {}
};

inline void require(bool ok, const std::string& message) {
  if (!ok) throw ArgumentError(message);
}

}  // namespace dyadkit
