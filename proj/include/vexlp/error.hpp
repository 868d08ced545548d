#pragma once

#include <stdexcept>
#include <string>

namespace vexlp {

/// Numerical or domain failure raised by a library operation.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vexlp
