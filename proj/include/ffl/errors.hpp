#pragma once

#include <stdexcept>
#include <string>

namespace ffl {

/// Invalid argument or violated precondition (bad curve, wrong length, ...).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

class DivisionByZero : public DomainError {
  public:
    using DomainError::DomainError;
};

class NotPrincipalError : public DomainError {
  public:
    using DomainError::DomainError;
};

/// A proven statement failed to hold, or two independent routes disagree.
/// Reaching this always means an implementation bug.
class TheoremViolation : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

} // namespace ffl
