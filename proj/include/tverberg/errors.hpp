#pragma once

#include <stdexcept>
#include <string>

namespace tverberg {

/// Precondition violated by caller-supplied data.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A proof-level identity that must hold failed to hold. Never expected.
class InternalConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A floating-point evaluation hit a degenerate configuration
/// (vanishing norm, unresolvable determinant sign, ...).
class NumericalDegeneracy : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tverberg
