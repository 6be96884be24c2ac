#pragma once

#include <stdexcept>
#include <string>

namespace ortho {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed arguments: bad sizes, out-of-range indices, unparsable specs.
struct DomainError : Error {
    using Error::Error;
};

// Two values from different groups fed into one operation.
struct GroupMismatchError : DomainError {
    explicit GroupMismatchError(const std::string& what) : DomainError(what) {}
};

// Typed precondition failures for the partition solvers.
struct IdentityPresentError : DomainError {
    using DomainError::DomainError;
};
struct SumMismatchError : DomainError {
    using DomainError::DomainError;
};
struct DivisibilityError : DomainError {
    using DomainError::DomainError;
};

// Requested enumeration exceeds the configured desk-scale cap.
struct BudgetError : Error {
    using Error::Error;
};

}  // namespace ortho
