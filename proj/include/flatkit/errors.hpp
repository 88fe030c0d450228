#pragma once

#include <stdexcept>
#include <string>

namespace flatkit {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different quadratic fields.
class FieldMismatch : public Error {
 public:
  using Error::Error;
};

/// Input data (surface specs, polygons, gluings) failed validation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A soundness check inside an algorithm tripped. Always a bug or an
/// unhandled degenerate configuration, never a user error.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace flatkit
