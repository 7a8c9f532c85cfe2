#pragma once

#include <stdexcept>

namespace qcp {

/// Invalid experiment configuration (bad topology, sharing mode, schema...).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A resource budget was exceeded (term caps, statevector size limits).
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qcp
