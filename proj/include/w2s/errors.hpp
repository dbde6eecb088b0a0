#pragma once

#include <stdexcept>
#include <string>

namespace w2s {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid input: schema violations, out-of-range values, malformed files.
// The message names the offending line/row/field where applicable.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A computed quantity violated one of the library's own invariants.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace w2s
