#pragma once

#include <stdexcept>
#include <string>

namespace mflab {

/// Process exit codes shared by the CLI and the error hierarchy.
enum class ExitCode : int {
  ok = 0,
  validation = 2,
  numerical = 3,
  budget = 4,
};

class Error : public std::runtime_error {
public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

private:
  ExitCode code_;
};

/// Bad input: malformed model files, out-of-range parameters, domain violations.
class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& what) : Error(ExitCode::validation, what) {}
};

/// A numerical cross-check or iteration failed.
class NumericalError : public Error {
public:
  explicit NumericalError(const std::string& what) : Error(ExitCode::numerical, what) {}
};

/// Enumeration or simulation budget exceeded.
class BudgetError : public Error {
public:
  explicit BudgetError(const std::string& what) : Error(ExitCode::budget, what) {}
};

}  // namespace mflab
