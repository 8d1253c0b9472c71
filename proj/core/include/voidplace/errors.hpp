#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace voidplace {

/// Positive-definite factorization failed even after jitter escalation.
class FactorizationError : public std::runtime_error {
 public:
  FactorizationError(const std::string& what, double final_jitter)
      : std::runtime_error(what), final_jitter_(final_jitter) {}

  /// Last diagonal jitter that was attempted before giving up.
  double final_jitter() const { return final_jitter_; }

 private:
  double final_jitter_;
};

/// Newton iteration did not reach the step-norm tolerance in the allowed
/// number of iterations. Carries the per-iteration step norms for diagnosis.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> step_norms)
      : std::runtime_error(what), step_norms_(std::move(step_norms)) {}

  const std::vector<double>& step_norms() const { return step_norms_; }
  int iterations() const { return static_cast<int>(step_norms_.size()); }

 private:
  std::vector<double> step_norms_;
};

/// Requested subset enumeration exceeds the configured cap.
class EnumerationCapError : public std::runtime_error {
 public:
  EnumerationCapError(const std::string& what, double required, double cap)
      : std::runtime_error(what), required_(required), cap_(cap) {}

  double required() const { return required_; }
  double cap() const { return cap_; }

 private:
  double required_;
  double cap_;
};

/// Malformed or incomplete run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace voidplace
