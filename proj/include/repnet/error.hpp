#pragma once

#include <stdexcept>
#include <string>

namespace repnet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on arguments or configuration was violated.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An input stream or file could not be read.
class InputError : public Error {
 public:
  using Error::Error;
};

/// More than half of the records of an input were malformed.
class CorruptInputError : public InputError {
 public:
  using InputError::InputError;
};

/// An iterative method did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Respondent sampling could not satisfy its group-size requirements.
class SamplingError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace repnet
