#pragma once

#include <stdexcept>
#include <string>

namespace qfrac {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept = 0;
};

// Bad argument or a point outside the operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "DomainError"; }
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "ConvergenceError"; }
};

// A denominator factor of a product vanished.
class SingularityError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "SingularityError"; }
};

class PoleError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "PoleError"; }
};

}  // namespace qfrac
