#pragma once

#include <stdexcept>
#include <string>

namespace parakron {

// Input did not satisfy a structural or mathematical precondition.
struct ValidationError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct DimensionError : ValidationError
{
    using ValidationError::ValidationError;
};

struct NotRegularError : ValidationError
{
    using ValidationError::ValidationError;
};

struct NotLocallyFreeError : ValidationError
{
    using ValidationError::ValidationError;
};

struct SaturationError : ValidationError
{
    using ValidationError::ValidationError;
};

struct NotInSubcategoryError : ValidationError
{
    using ValidationError::ValidationError;
};

struct PreconditionError : ValidationError
{
    using ValidationError::ValidationError;
};

// An enumeration would exceed the configured budget.
struct BudgetError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

// Two computations that must agree did not. Signals a bug or a counterexample.
struct InvariantFailure : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

} // namespace parakron
