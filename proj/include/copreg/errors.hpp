#pragma once

#include <stdexcept>
#include <string>

namespace copreg {

/// Argument outside the domain of an operation (e.g. u not in (0,1)).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Copula parameters outside the family's admissible box.
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Iterative numerics that failed to reach their tolerance.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad user configuration: unknown names, malformed files, missing fields.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace copreg
