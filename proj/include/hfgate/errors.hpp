#pragma once

#include <stdexcept>
#include <string>

namespace hfgate {

// Invalid or unusable input: bad parameter values, unknown isotopes, missing
// bunching factors, oversized lattice regions. Maps to the CLI config exit code.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnknownIsotopeError : public InputError {
 public:
  using InputError::InputError;
};

class MissingEtaError : public InputError {
 public:
  using InputError::InputError;
};

class SizingError : public InputError {
 public:
  using InputError::InputError;
};

// A numerical procedure could not deliver a result with the requested
// accuracy. Maps to the CLI numerical-failure exit code.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ResolutionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateSiteError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace hfgate
