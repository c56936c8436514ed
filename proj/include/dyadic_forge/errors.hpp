#pragma once

#include <stdexcept>
#include <string>

namespace dyadic_forge {

// Exit-code families used by the CLI: 2, 3 and 4 respectively.
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PropertyViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EnvironmentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Refinement guard in combination norms; reported as a precondition failure.
struct ResourceError : PreconditionError {
  using PreconditionError::PreconditionError;
};

}  // namespace dyadic_forge
