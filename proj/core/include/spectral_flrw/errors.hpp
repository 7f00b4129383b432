#pragma once

#include <stdexcept>
#include <string>

namespace sflrw {

/// Argument outside the domain where a quantity is defined
/// (power law at t <= 0, non-positive scale factor, singular symbol, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Parameter set rejected by validation.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A scale factor fell below the collapse threshold.
class CollapseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive step size underflowed or the step budget ran out.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed scenario configuration. The message carries the JSON path.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace sflrw
