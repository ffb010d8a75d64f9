#pragma once

#include <stdexcept>
#include <string>

namespace pinchlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad parameters or domain violations (CLI exit code 2).
struct ConfigError : Error {
  using Error::Error;
};

// Convergence failures and broken numeric contracts (CLI exit code 3).
struct NumericError : Error {
  using Error::Error;
};

// Unreadable or invalid files (CLI exit code 4).
struct IoError : Error {
  using Error::Error;
};

// Mesh invariant violations. Readers rethrow these as IoError.
struct MeshError : NumericError {
  using NumericError::NumericError;
};

}  // namespace pinchlab
