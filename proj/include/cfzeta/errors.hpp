#pragma once

#include <stdexcept>
#include <string>

namespace cfzeta {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
  using Error::Error;
};

/// Evaluation requested exactly at a pole (s = 1 for the prefactored sums).
struct PoleError : Error {
  using Error::Error;
};

/// A floating-point result left the finite range.
struct OverflowError : Error {
  using Error::Error;
};

/// An iterative procedure exhausted its budget without stabilizing.
struct ConvergenceError : Error {
  using Error::Error;
};

/// Malformed input file or unwritable output.
struct IoError : Error {
  using Error::Error;
};

/// Invalid configuration; maps to CLI exit code 2.
struct UsageError : Error {
  using Error::Error;
};

}  // namespace cfzeta
