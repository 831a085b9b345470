#pragma once

#include <stdexcept>
#include <string>

namespace fnls {

// Invalid arguments or configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A requested operation does not fit on the discretization (CLI exit code 2).
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical run failed (blow-up, failed decay precondition).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fnls
