#pragma once

#include <stdexcept>
#include <string>

namespace cvhbac {

// Caller broke an interface contract (dimension mismatch, bad index, ...).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain (non-positive frequency, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Moments that violate a physical invariant (uncertainty relation, ...).
class InvalidStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fock truncation too small: probability mass beyond the cutoff is too large.
class CutoffError : public std::runtime_error {
 public:
  CutoffError(const std::string& what, double leakage)
      : std::runtime_error(what), leakage_(leakage) {}
  double leakage() const { return leakage_; }

 private:
  double leakage_;
};

// Closed-form expansion used outside the range where it is defined.
class ValidityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace cvhbac
