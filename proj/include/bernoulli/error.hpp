#pragma once

#include <stdexcept>
#include <string>

namespace bernoulli {

/// Malformed or degenerate input (negative data, non-convex polygon, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed input that cannot be used as configured (grid too coarse, ...).
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Call-site contract violation (exterior cell, t outside (0,1), ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A result contradicts a property the library relies on; must not be ignored.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace bernoulli
