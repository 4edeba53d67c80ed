#pragma once

#include <stdexcept>
#include <string>

namespace khl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed textual input (PD codes, builder expressions, fixture files).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Structurally invalid object: inconsistent diagram, bad matching, etc.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A configured size bound was exceeded.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

// An algebraic precondition failed (d^2 != 0, non-invertible pivot, ...).
class AlgebraError : public Error {
 public:
  using Error::Error;
};

}  // namespace khl
