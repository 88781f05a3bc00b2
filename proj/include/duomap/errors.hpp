#pragma once

#include <stdexcept>
#include <string>

namespace duomap {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Y is not a character permutation of X (or lengths differ).
struct PermutationMismatch : Error {
  using Error::Error;
};

// An edge set handed to a matching-consuming operation is not a valid
// consecutive matching.
struct InvalidMatching : Error {
  using Error::Error;
};

struct EdgeAlreadyRemoved : Error {
  using Error::Error;
};

struct PreconditionViolated : Error {
  using Error::Error;
};

struct EpsilonOutOfRange : Error {
  using Error::Error;
};

// The candidate-evaluation budget of a bounded search was exhausted.
struct BudgetExceeded : Error {
  using Error::Error;
};

struct InstanceTooLarge : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

struct ParameterError : Error {
  using Error::Error;
};

}  // namespace duomap
