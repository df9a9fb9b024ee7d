#pragma once

#include <stdexcept>
#include <string>

namespace bellsep {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A table does not match the scenario's shape.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A value-level invariant (normalization, positivity, ...) is broken.
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// Operation called with the wrong numeric mode (exact vs float).
class ModeError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Enumeration would exceed the configured cap.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Sampled records do not cover every (x,y) cell.
class CoverageError : public Error {
 public:
  using Error::Error;
};

class ScenarioMismatch : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace bellsep
