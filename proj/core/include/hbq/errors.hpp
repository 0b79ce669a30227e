#pragma once

#include <stdexcept>
#include <string>

namespace hbq {

// Precondition failures on user-supplied values (grid sizes, parameters, configs).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// inverse_dft was handed coefficients that do not describe a real field.
class SymmetryViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A periodic antiderivative was requested for a field with nonzero mean.
class NonzeroMean : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// (p, eta1, eta2) admit no sech-type solitary wave (c^2 would be non-positive).
class NoSolitaryWave : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Convergence data with a zero error: the order is saturated and undefined.
class DegenerateInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace hbq
