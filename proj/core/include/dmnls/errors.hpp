#pragma once

#include <stdexcept>
#include <string>

namespace dmnls {

/// Precondition or domain violation on user-supplied input.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure failed to produce a trustworthy result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Amplitudes grew past the overflow guard; the state is most likely
/// concentrating toward a singularity.
class BlowupSuspected : public NumericalError {
 public:
  BlowupSuspected(const std::string& what, double amplitude)
      : NumericalError(what), amplitude_(amplitude) {}
  double amplitude() const noexcept { return amplitude_; }

 private:
  double amplitude_;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace dmnls
