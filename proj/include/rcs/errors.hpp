#pragma once

#include <stdexcept>
#include <string>

namespace rcs {

// Malformed or mutually inconsistent input data (bad bands, divisor outside
// its gap, D <= 0, g out of range, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Evaluation requested outside the domain of an operation (Im z <= 0,
// boundary density in a gap, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical reconstruction did not reproduce its input within tolerance.
class InconsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation applied to a set of the wrong kind (e.g. a Dirac normal form
// over a compact set).
class CaseMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computed orbit representative failed its own normal-form conditions.
class NormalFormError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rcs
