#pragma once

#include <stdexcept>
#include <string>

namespace horolab {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-range input: unknown vertex ids, bad configs, bad words.
class InputError : public Error {
 public:
  using Error::Error;
};

// A configured size or work budget would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// An operation was called on an argument that violates its precondition
// (e.g. a path that is not a geodesic).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace horolab
