#pragma once

#include <stdexcept>

namespace owakm {

// Malformed user input: bad files, invalid parameters, violated preconditions.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Problem size exceeds a configured enumeration / LP capacity limit.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Internal numerical failure (simplex breakdown, iteration limit, ...).
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace owakm
