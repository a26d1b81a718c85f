#pragma once

#include <stdexcept>
#include <string>

namespace e2neg {

// Base for every failure raised by the library. Callers that only care about
// "did it work" catch this; the CLI maps it to a nonzero exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input files.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Iterative solver did not reach the requested tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double worst_residual)
      : Error(what), worst_residual_(worst_residual) {}
  double worst_residual() const noexcept { return worst_residual_; }

 private:
  double worst_residual_;
};

// Training produced a non-finite or undefined quantity.
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace e2neg
