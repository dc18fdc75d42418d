#pragma once

#include <stdexcept>
#include <string>

namespace ddsim {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad argument to a library call (out-of-range site, non-positive duration, ...).
struct ArgumentError : Error {
  using Error::Error;
};

// An input object violates its documented invariants (non-Hermitian generator,
// invalid density matrix, ...).
struct ValidationError : Error {
  using Error::Error;
};

// Symbolic conjugation was asked for a rotation angle outside the Clifford set.
struct UnsupportedAngleError : Error {
  using Error::Error;
};

// Random geometry could not be realized (e.g. min separation unsatisfiable).
struct GenerationError : Error {
  using Error::Error;
};

// Accumulated floating-point drift exceeded tolerance during propagation.
struct NumericalDriftError : Error {
  using Error::Error;
};

// Run configuration rejected; the message names the key and the line.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace ddsim
