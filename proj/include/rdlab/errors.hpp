#pragma once

#include <stdexcept>

namespace rdlab {

/// Numerical failure inside a pipeline (invariant violated, iteration
/// stagnated, positivity lost). CLI exit code 1.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A compute budget was exhausted (time horizon, escalation cap, memory).
/// CLI exit code 3.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace rdlab
