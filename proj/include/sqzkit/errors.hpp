#pragma once

#include <stdexcept>
#include <string>

namespace sqzkit {

// Root of every error the toolkit throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Resonator geometry without a confined eigenmode.
class StabilityError : public Error {
 public:
  using Error::Error;
};

// Requested mode cannot be produced by the given mirror.
class NoSolutionError : public Error {
 public:
  using Error::Error;
};

// Pump at or above the oscillation threshold.
class ThresholdError : public Error {
 public:
  using Error::Error;
};

// Undoing a loss would need a variance below the loss floor.
class NonphysicalCorrectionError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

// Malformed user input (scenario, data file, command line).
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace sqzkit
