#pragma once

#include <stdexcept>
#include <string>

namespace pasim {

// Bad configuration or malformed input files.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid data passed across a module boundary.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: non-convergence, norm drift, step-size underflow.
struct NumericsError : std::runtime_error {
  explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pasim
