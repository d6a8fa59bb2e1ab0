#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ripshom {

// Absolute tolerance used for comparisons of distances, birth values and
// parameter values throughout the library.
inline constexpr double kDefaultTol = 1e-9;

// Input or hypothesis validation failed (CLI exit code 1).
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A configured resource budget was exceeded (CLI exit code 2).
struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An internal consistency condition failed, e.g. a retraction produced
// under a satisfied hypothesis does not land where it must. This is a bug
// signal, never an input problem.
struct inconsistency_error : std::logic_error {
    using std::logic_error::logic_error;
};

// Caps on enumerative constructions. RIPS_HOMOTOPY_BUDGET accepts
// "N" (simplex cap) or "N,M" (simplex cap, order-complex chain cap).
struct Budget {
    std::size_t max_simplices = 1'000'000;
    std::size_t max_chains = 100'000;

    static Budget from_env();
};

}  // namespace ripshom
