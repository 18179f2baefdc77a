#pragma once

#include <stdexcept>
#include <string>

namespace qvdp {

// Base for every error raised by the library. Callers that only care about
// "this point failed" catch this; the CLI records what() in the error column.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Superoperator dimension exceeds what the sparse index type can address.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class DegenerateSteadyState : public Error {
 public:
  DegenerateSteadyState(int nullity, const std::string& what)
      : Error(what), nullity_(nullity) {}
  int nullity() const noexcept { return nullity_; }

 private:
  int nullity_;
};

class TruncationExceeded : public Error {
 public:
  using Error::Error;
};

class SolverSingular : public Error {
 public:
  using Error::Error;
};

class NotConverged : public Error {
 public:
  using Error::Error;
};

class StepUnstable : public Error {
 public:
  using Error::Error;
};

class NonRealResponse : public Error {
 public:
  using Error::Error;
};

class PassiveUndefined : public Error {
 public:
  using Error::Error;
};

class QuadratureUnderResolved : public Error {
 public:
  using Error::Error;
};

class OverflowGuard : public Error {
 public:
  using Error::Error;
};

}  // namespace qvdp
