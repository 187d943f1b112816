// Exception hierarchy shared by all modules.
#pragma once

#include <stdexcept>
#include <string>

namespace hak {

// Base class; every error raised by the library derives from this.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input: bad dimensions, broken Jacobi identity, invalid JSON, ...
struct InputError : Error {
  using Error::Error;
};

// A linear solve / factorization hit a numerically singular matrix.
struct SingularError : Error {
  using Error::Error;
};

// A requested construction strategy is not applicable to the given data.
struct StrategyError : Error {
  using Error::Error;
};

// A user-supplied complement or structure fails an invariance check.
struct InvarianceError : Error {
  using Error::Error;
};

// The (restricted) 2-form is degenerate where nondegeneracy is required.
struct DegenerateSymplecticError : Error {
  using Error::Error;
};

// ad_V restricted to the complement is not invertible.
struct NonInvertibleAdVError : Error {
  using Error::Error;
};

// Block extraction met a block on which the pairing form degenerates.
struct DegenerateBlockError : Error {
  using Error::Error;
};

// A randomized generator exhausted its retry budget.
struct GenerationError : Error {
  using Error::Error;
};

}  // namespace hak
