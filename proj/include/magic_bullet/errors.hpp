#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace magic_bullet {

inline std::string scientific(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// Error families double as CLI exit codes.
enum class ErrorFamily : int {
  kValidation = 2,
  kIntegration = 3,
  kTruncation = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorFamily family, const std::string& what)
      : std::runtime_error(what), family_(family) {}

  ErrorFamily family() const noexcept { return family_; }
  int exit_code() const noexcept { return static_cast<int>(family_); }

 private:
  ErrorFamily family_;
};

/// Bad input: out-of-range parameter, dimension mismatch, broken precondition.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorFamily::kValidation, what) {}
};

/// Pump at or above the oscillation threshold.
class AboveThresholdError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Conditioning on an event of (numerically) zero probability.
class OrthogonalProjectionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Adaptive quadrature failed to reach the requested tolerance.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double achieved, double requested)
      : Error(ErrorFamily::kIntegration,
              what + " (achieved error " + scientific(achieved) + ", requested " +
                  scientific(requested) + ")"),
        achieved_(achieved),
        requested_(requested) {}

  double achieved() const noexcept { return achieved_; }
  double requested() const noexcept { return requested_; }

 private:
  double achieved_;
  double requested_;
};

/// Frequency-bin discretization does not capture enough of the weighted spectrum.
class CoverageError : public Error {
 public:
  CoverageError(const std::string& what, double captured)
      : Error(ErrorFamily::kIntegration,
              what + " (captured mass fraction " + std::to_string(captured) + ")"),
        captured_(captured) {}

  double captured() const noexcept { return captured_; }

 private:
  double captured_;
};

/// Fock-space truncation too small (or too large to hold densely).
class TruncationError : public Error {
 public:
  explicit TruncationError(const std::string& what)
      : Error(ErrorFamily::kTruncation, what) {}
};

}  // namespace magic_bullet
