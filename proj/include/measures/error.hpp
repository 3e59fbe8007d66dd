#pragma once

#include <stdexcept>
#include <string>

namespace measures {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameter values or parameter names.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Point does not have the shape of the measure's sample space.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Density recursion reached two primitives with no rule relating them.
class UnrelatedPrimitivesError : public Error {
 public:
  explicit UnrelatedPrimitivesError(const std::string& detail)
      : Error("unrelated primitive measures: " + detail) {}
};

// Sampling requested from a measure with infinite, zero, or unknown mass.
class NotProbabilityError : public Error {
 public:
  explicit NotProbabilityError(const std::string& detail)
      : Error("not a probability measure: " + detail) {}
};

// An oracle hit an undefined density inside its region.
class UndefinedDensityError : public Error {
 public:
  using Error::Error;
};

}  // namespace measures
