#pragma once

#include <stdexcept>
#include <string>

namespace levyext {

/// Argument outside the mathematical domain of an operation (x <= 0, p <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Model or kernel combination the toolkit cannot handle (infinite variation,
/// unsupported body type, ...).
class UnsupportedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An integral that the configuration makes infinite.
class DivergenceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Grid construction asked for cubes smaller than one lattice unit.
class DegenerateGridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace levyext
