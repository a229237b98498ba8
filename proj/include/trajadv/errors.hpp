#pragma once

#include <stdexcept>
#include <string>

namespace trajadv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent configuration: dimension mismatches, invalid
// parameters, unknown keys, unsupported features.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Non-finite or otherwise unusable numeric input.
class InputError : public Error {
 public:
  using Error::Error;
};

// Mass matrix (or another factorized quantity) is numerically singular.
class DegenerateModelError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace trajadv
