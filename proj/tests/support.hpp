#pragma once

// Shared test utilities: a deterministic RNG with explicit arithmetic (no
// std distributions, which are implementation-defined), random geometric
// instance generators, and the independent brute-force oracles the unit
// and acceptance suites check the library against.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "ripshom/filtration.hpp"
#include "ripshom/invariants.hpp"
#include "ripshom/metric.hpp"
#include "ripshom/systems.hpp"

namespace testsupport {

struct Rng {
    std::mt19937_64 gen;

    explicit Rng(uint64_t seed) : gen(seed) {}

    double unit() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
    int below(int n) { return static_cast<int>(gen() % static_cast<uint64_t>(n)); }
    int between(int lo, int hi) { return lo + below(hi - lo + 1); }  // inclusive
};

inline std::vector<std::vector<double>> random_planar_points(Rng& rng, int n) {
    std::vector<std::vector<double>> pts(n);
    for (auto& p : pts) p = {rng.unit(), rng.unit()};
    return pts;
}

// Random non-empty sorted subset of {0..n-1}.
inline std::vector<int> random_subset(Rng& rng, int n) {
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
        if (rng.below(2)) out.push_back(i);
    if (out.empty()) out.push_back(rng.below(n));
    return out;
}

// ---- oracles ----

// Hausdorff by direct evaluation of both directed max-min sweeps.
inline double brute_hausdorff(const std::vector<int>& xs, const std::vector<int>& ys,
                              const ripshom::MetricPoints& m) {
    double worst = 0.0;
    for (int a : xs) {
        double best = 1e300;
        for (int b : ys) best = std::min(best, m.dist(a, b));
        worst = std::max(worst, best);
    }
    for (int b : ys) {
        double best = 1e300;
        for (int a : xs) best = std::min(best, m.dist(a, b));
        worst = std::max(worst, best);
    }
    return worst;
}

// Configuration-space condition by enumerating all ordered distinct
// (k+1)-tuples on both sides.
bool brute_config_lt(const ripshom::SubsetPair& pair, int k, double r);

// All subsets of size <= dim_cap+1 whose pairwise distances are <= t,
// enumerated independently of the library's complex construction.
std::vector<ripshom::Simplex> brute_rips_slice(const ripshom::MetricPoints& m, double t,
                                               int dim_cap, double tol);

// Degree-k slice by direct evaluation of the neighbour condition on every
// subset: diameter <= t and each vertex has >= k other points within t.
std::vector<ripshom::Simplex> brute_degree_slice(const ripshom::MetricPoints& m, double t, int k,
                                                 int dim_cap, double tol);

// Transitive closure of the edge relation, by repeated sweeps.
std::vector<std::vector<int>> brute_components(const ripshom::ComplexSlice& slice);

// Random downward-closed slice with at most max_simplices simplices.
ripshom::ComplexSlice random_slice(Rng& rng, int max_vertices, int max_simplices);

// Triangulations with known homotopy type, used as frozen oracles.
ripshom::ComplexSlice projective_plane_slice();
ripshom::ComplexSlice wedge_of_two_squares_slice();
ripshom::ComplexSlice torus_slice();
ripshom::ComplexSlice projective_plane_wedge_circle_slice();

// ---- random systems over integer grids ----
//
// Integer grids keep shift arithmetic exact, so the triangle-bound and
// pushout properties are tested without grid-rounding noise. Maps are
// generated natural by construction: the target splits into a part the map
// surjects onto and an independent remainder.

ripshom::PhaseGrid integer_grid(int levels);

ripshom::SetSystem random_set_system(Rng& rng, int levels, int max_size);

// Natural map out of a fresh source onto (part of) `target_hint` levels;
// returns a map whose source and target live on the same integer grid.
ripshom::SetSystemMap random_set_map(Rng& rng, int levels, int max_size);

// Natural map whose source is exactly `source` (for composable chains).
ripshom::SetSystemMap random_set_map_from(Rng& rng, const ripshom::SetSystem& source,
                                          int max_size);

ripshom::VecSystemMap random_vec_map(Rng& rng, int levels, int max_dim, int p);
ripshom::VecSystemMap random_vec_map_from(Rng& rng, const ripshom::VecSystem& source, int max_dim);

// Element-by-element evaluations of the r-predicates for GF(2) systems of
// dimension <= 4, enumerating whole vector spaces.
bool brute_vec_mono(const ripshom::VecSystemMap& f, double r);
bool brute_vec_epi(const ripshom::VecSystemMap& f, double r);

}  // namespace testsupport
