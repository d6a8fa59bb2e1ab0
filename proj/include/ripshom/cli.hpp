#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ripshom/common.hpp"

namespace ripshom::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;  // bad input or failed hypothesis
inline constexpr int kExitBudget = 2;
inline constexpr int kExitTheoremViolation = 3;  // a certificate or property failed

struct RunConfig {
    std::filesystem::path input;
    std::filesystem::path out;
    std::filesystem::path csv_out;          // optional Betti curves
    std::filesystem::path complex_out;      // optional complex export
    std::filesystem::path system_map_file;  // serialized-systems mode
    std::vector<int> subset_indices;
    int dim_cap = 2;
    int deg_cap = 3;
    std::vector<int> primes{2};
    std::optional<double> r;
    int k = 0;
    uint64_t seed = 1;
    int count = 100;
    double tolerance = kDefaultTol;

    void validate() const;
    Budget budget() const { return Budget::from_env(); }
};

// Per-slice invariants across the phase grid, JSON report plus optional
// CSV Betti curves.
int cmd_invariants(const RunConfig& config);

// Interleaving certificate for a subset pair at radius r and degree k.
int cmd_stability(const RunConfig& config);

// Controlled-equivalence radius of a subset pair's invariant bundle, or of
// a serialized system map.
int cmd_systems(const RunConfig& config);

// Seeded self-check of the calculus on geometric instances: triangle
// bounds under composition, pushout stability, shift monotonicity.
int cmd_proptest(const RunConfig& config);

// Maps exceptions from a command body onto exit codes.
int run_guarded(const RunConfig& config, int (*command)(const RunConfig&));

}  // namespace ripshom::cli
