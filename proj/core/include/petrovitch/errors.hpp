#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace petrovitch {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A sign could not be decided at the working precision.
class IndeterminateError : public Error {
 public:
  IndeterminateError(const std::string& what, int index) : Error(what), index_(index) {}
  int index() const noexcept { return index_; }

 private:
  int index_;
};

/// An iterative method exhausted max_iter; carries the last bracket as text.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::string lo, std::string hi)
      : Error(what), lo_(std::move(lo)), hi_(std::move(hi)) {}
  const std::string& last_lo() const noexcept { return lo_; }
  const std::string& last_hi() const noexcept { return hi_; }

 private:
  std::string lo_, hi_;
};

class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// A residual check failed; rerunning with more bits is the remedy.
class PrecisionError : public Error {
 public:
  PrecisionError(const std::string& what, unsigned suggested_bits)
      : Error(what), suggested_bits_(suggested_bits) {}
  unsigned suggested_bits() const noexcept { return suggested_bits_; }

 private:
  unsigned suggested_bits_;
};

class SeedError : public Error {
 public:
  using Error::Error;
};

class BracketError : public Error {
 public:
  using Error::Error;
};

class ContractError : public Error {
 public:
  ContractError(const std::string& what, int iteration) : Error(what), iteration_(iteration) {}
  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

/// Division by a value that vanishes at working precision (f(-q) ~ 0).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Continuation lost the tracked extremum; `last_good_q` is a decimal string.
class TrackingError : public Error {
 public:
  TrackingError(const std::string& what, std::string last_good_q)
      : Error(what), last_good_q_(std::move(last_good_q)) {}
  const std::string& last_good_q() const noexcept { return last_good_q_; }

 private:
  std::string last_good_q_;
};

/// Requested more roots/branches than the sign certificate could enumerate.
class IncompleteEnumeration : public Error {
 public:
  using Error::Error;
};

}  // namespace petrovitch
