#pragma once

#include <stdexcept>
#include <string>

namespace sgauge {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A group element has an eigenphase too close to the branch cut of the
/// principal logarithm (or its log leaves the algebra).
class BranchAmbiguityError : public Error {
 public:
  using Error::Error;
};

class DegenerateSimplexError : public Error {
 public:
  using Error::Error;
};

/// An interpolated smooth field produced links outside the log-safe region.
class FieldTooRoughError : public Error {
 public:
  using Error::Error;
};

class NotInvariantError : public Error {
 public:
  using Error::Error;
};

class InvalidFieldError : public Error {
 public:
  using Error::Error;
};

class EvaluationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace sgauge
