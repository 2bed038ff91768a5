#pragma once

#include <stdexcept>
#include <string>

namespace ptwell {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Out-of-domain input: negative width, non-positive mass, Λ = 0 in κ(Λ), ...
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// The closed forms divide by zero at this input (α = 0, k = 0).
class SingularParameter : public Error {
 public:
  using Error::Error;
};

class ContinuationStall : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// Two branches handed to the EP locator do not merge.
class NotAPair : public Error {
 public:
  using Error::Error;
};

class NoBoundState : public Error {
 public:
  using Error::Error;
};

class EigensolverFailure : public Error {
 public:
  using Error::Error;
};

class QuadratureDepthExceeded : public Error {
 public:
  using Error::Error;
};

/// Two independent evaluation routes of the same quantity disagree.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace ptwell
