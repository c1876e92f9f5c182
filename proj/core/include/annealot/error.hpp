#pragma once

#include <stdexcept>
#include <string>

namespace annealot {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// Support detection found entries inside the (tau, eta] band.
class NoSeparation : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class SingularSystem : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class InconsistentJacobian : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class CalibrationInconclusive : public Error {
 public:
  using Error::Error;
};

}  // namespace annealot
