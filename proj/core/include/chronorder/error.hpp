#pragma once

#include <stdexcept>
#include <string>

namespace chronorder {

// Base of every error raised by the library. The CLI maps subclasses onto exit
// codes: ValidationError/ParseError are usage-class (2), the rest runtime (1).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class SamplingError : public Error {
 public:
  using Error::Error;
};

// Kernel weights summed to zero (or overflowed) at the evaluation point.
class DegenerateEvaluationError : public Error {
 public:
  using Error::Error;
};

class ObjectiveError : public Error {
 public:
  using Error::Error;
};

}  // namespace chronorder
