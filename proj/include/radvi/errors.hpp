#pragma once

#include <stdexcept>
#include <string>

namespace radvi {

// Bad user-supplied configuration (family names, dictionary parameters, ...).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A numerical routine failed to converge or produced an unusable result.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Operation not available for this target/model combination.
class UnsupportedOperation : public std::logic_error {
 public:
  explicit UnsupportedOperation(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace radvi
