#pragma once

#include <vector>

#include "ripshom/common.hpp"
#include "ripshom/filtration.hpp"
#include "ripshom/invariants.hpp"
#include "ripshom/metric.hpp"

namespace ripshom {

enum class TieRule { LeastIndex, GreatestIndex };

// A retraction Y -> X: fixes members pointwise, moves every other point to
// a member within distance r. For the degree variant the map is partial
// (defined on the vertices of one degree slice); -1 marks absence.
struct Retraction {
    double r = 0.0;
    int k = 0;
    std::vector<int> map;  // ambient index -> ambient index of a member, or -1

    bool defined_at(int y) const { return map[y] >= 0; }
    int operator()(int y) const { return map[y]; }

    // Elementwise image of a simplex in ambient indices, deduplicated.
    std::vector<int> image(const std::vector<int>& simplex) const;
};

// Nearest-member retraction; requires d_H(X, Y) < r.
Retraction build_retraction(const SubsetPair& pair, double r,
                            TieRule tie = TieRule::LeastIndex);

// Degree-aware retraction on the vertices of the degree-k slice of Y at
// parameter s: vertices of the degree-k slice of X are fixed, every other
// vertex is sent to the head of the first matched distinct member tuple
// (tuple order decided by `tie`). Requires the configuration hypothesis.
Retraction build_degree_retraction(const SubsetPair& pair, int k, double s, double r,
                                   TieRule tie = TieRule::LeastIndex);

// Finite witness that the stability diagram commutes on the nose in the
// upper triangle and up to the inclusion-into-the-union homotopy in the
// lower one, at every phase value of the ambient grid.
struct InterleavingCertificate {
    double r = 0.0;
    int k = 0;
    PhaseGrid grid;
    struct GridCheck {
        double s = 0.0;
        bool theta_lands = false;     // θ(τ) in the (s+2r, k) slice of X
        bool upper_commutes = false;  // θ fixes the (s, k) slice of X
        bool union_witness = false;   // τ ∪ θ(τ) in the (s+2r, k) slice of Y
    };
    std::vector<GridCheck> checks;
    bool overall = false;
};

InterleavingCertificate verify_interleaving(const SubsetPair& pair, double r, int k,
                                            int dim_cap = 2, double tol = kDefaultTol,
                                            TieRule tie = TieRule::LeastIndex,
                                            const Budget& budget = {});

// Homology-level verdict for the two-sided (non-nested) stability
// statement: complexes on the correspondence set
// U = {(x, y) : d(x, y) < r} project onto the complexes of X and of Y by
// weak equivalences, and the zig-zag composite equals the parameter shift.
struct CrossmapVerdict {
    struct PerDegree {
        int degree = 0;
        bool projections_iso = false;
        bool composite_equals_shift = false;
    };
    std::vector<PerDegree> degrees;
    bool overall = false;
};

struct CrossmapLimits {
    int max_points = 8;
    int dim_cap = 2;
};

CrossmapVerdict crossmap_stability_check(const MetricPoints& xs, const MetricPoints& ys,
                                         const std::vector<std::vector<double>>& cross_dist,
                                         double r, double s, int p = 2, int max_k = 1,
                                         const CrossmapLimits& limits = {},
                                         double tol = kDefaultTol, const Budget& budget = {});

// Whether the inclusion of degree-k slices at grid value s_i is an
// equivalence on the computable invariants (components, homology mod 2 and
// 3 in degrees <= max_k, loop-group abelianizations per component), under
// the gap hypothesis 2r < s_{i+1} - s_i.
bool phase_gap_check(const SubsetPair& pair, int k, double r, int gap_index, int dim_cap = 2,
                     int max_k = 1, double tol = kDefaultTol, const Budget& budget = {});

}  // namespace ripshom
