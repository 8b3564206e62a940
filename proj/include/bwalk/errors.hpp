#pragma once

#include <stdexcept>
#include <string>

namespace bwalk {

// Invalid dimensions, bad flags, guard violations. Maps to CLI exit code 1.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Eigensolver non-convergence, degenerate spectra, too many discarded bursts.
// Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside the domain of a closed-form expression (trace constraint,
// coincident eigenvalues where the formula has a pole).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class SingularInputError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace bwalk
