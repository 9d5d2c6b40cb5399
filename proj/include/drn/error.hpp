#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace drn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A coordinate function produced a value outside its component's range.
class RangeViolation : public Error {
 public:
  RangeViolation(std::size_t component, int value)
      : Error("rule of component " + std::to_string(component + 1) + " evaluated to " +
              std::to_string(value) + ", outside its range"),
        component_(component),
        value_(value) {}

  std::size_t component() const noexcept { return component_; }
  int value() const noexcept { return value_; }

 private:
  std::size_t component_;
  int value_;
};

/// A box would have to be enumerated but holds more states than the cap allows.
class EnumerationCapExceeded : public Error {
 public:
  EnumerationCapExceeded(std::uint64_t cardinality, std::uint64_t cap)
      : Error("box of " + std::to_string(cardinality) + " states exceeds enumeration cap " +
              std::to_string(cap)),
        cardinality_(cardinality),
        cap_(cap) {}

  std::uint64_t cardinality() const noexcept { return cardinality_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t cardinality_;
  std::uint64_t cap_;
};

/// Caller handed in a state, box, index or assignment that does not fit the network.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Programmatic network construction violated a model invariant.
class InvalidModel : public Error {
 public:
  using Error::Error;
};

class NotSymbolicSteadyState : public Error {
 public:
  NotSymbolicSteadyState() : Error("box is not a fixed point of the interval image operator") {}
};

class NotAFrozenCore : public Error {
 public:
  NotAFrozenCore() : Error("index set is not the frozen core of the given box") {}
};

class NotAComponentUnion : public Error {
 public:
  NotAComponentUnion() : Error("vertex set is not a union of components of the theta graph") {}
};

/// An iteration that is guaranteed to converge did not. Always an implementation bug.
class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace drn
