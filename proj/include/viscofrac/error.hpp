#pragma once

#include <stdexcept>
#include <string>

namespace viscofrac {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when input tensors or fields contain NaN/Inf.
class NonFiniteError : public Error {
 public:
  NonFiniteError() : Error("non-finite tensor") {}
};

/// Raised when an unregularized strain-limiting law is asked to invert a
/// strain of norm >= 1.
class StrainBoundError : public Error {
 public:
  explicit StrainBoundError(const std::string& what = "strain bound violated")
      : Error(what) {}
};

}  // namespace viscofrac
