#pragma once

#include <stdexcept>
#include <string>

namespace truncmul {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A rounded value does not fit the target mantissa range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

// Operands do not match the convolution plan (length or layout).
class PlanMismatch : public Error {
 public:
  using Error::Error;
};

// The float convolution backend cannot honor the requested precision.
class PrecisionUnsupported : public Error {
 public:
  using Error::Error;
};

// Transform length has a prime factor outside {2, 3, 5, 7}.
class UnsupportedLength : public Error {
 public:
  using Error::Error;
};

// Operands do not match the map context (b, N, or layout).
class ContextMismatch : public Error {
 public:
  using Error::Error;
};

// Polynomial degree exceeds what a reduction formula admits.
class DegreeTooLarge : public Error {
 public:
  using Error::Error;
};

// An operand lies outside the documented input range.
class InputOutOfRange : public Error {
 public:
  using Error::Error;
};

// No parameter set satisfies the requested constraints.
class NoValidParams : public Error {
 public:
  using Error::Error;
};

// A recombination value landed too far from the integer grid: the
// floating-point pipeline cannot certify the result at these parameters.
class ConvolutionPrecisionFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace truncmul
