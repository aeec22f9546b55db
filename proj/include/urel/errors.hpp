#pragma once

#include <stdexcept>
#include <string>

namespace urel {

/// Base class for all solver-level failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A conserved or primitive state outside the admissible set (p <= 0,
/// radicand of the pressure root <= 0, non-finite entries).
class DegenerateState : public Error {
 public:
  using Error::Error;
};

/// (a, b) pair of the radial system with |b| >= a.
class InvalidRadialState : public Error {
 public:
  using Error::Error;
};

/// Element mean pressure fell below the positivity floor.
class UnrecoverableVacuum : public Error {
 public:
  UnrecoverableVacuum(const std::string& what, long element)
      : Error(what), element_(element) {}
  long element() const noexcept { return element_; }

 private:
  long element_;
};

class SonicDenominator : public Error {
 public:
  using Error::Error;
};

class NoShockFound : public Error {
 public:
  using Error::Error;
};

/// Radial direction requested at the origin.
class OriginUndefined : public Error {
 public:
  using Error::Error;
};

}  // namespace urel
