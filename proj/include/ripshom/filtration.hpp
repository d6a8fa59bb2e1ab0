#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ripshom/common.hpp"
#include "ripshom/metric.hpp"

namespace ripshom {

// A simplex as its sorted, strictly increasing, non-empty vertex index list.
struct Simplex {
    std::vector<int> v;

    int dim() const { return static_cast<int>(v.size()) - 1; }
    bool operator==(const Simplex& o) const { return v == o.v; }
};

// Order used everywhere a list of simplices is "sorted": by dimension,
// then lexicographically on the vertex list.
bool simplex_less(const Simplex& a, const Simplex& b);

// The sorted distinct pairwise distance values of a data set, starting
// with 0: the parameter values at which any of its complexes can change.
struct PhaseGrid {
    std::vector<double> values;

    int size() const { return static_cast<int>(values.size()); }
};

PhaseGrid phase_grid(const MetricPoints& points, double tol = kDefaultTol);

// Simplices of the Rips poset of `points` together with their birth
// values: `rips_birth` is the diameter, `degree_births[k]` the least s at
// which every vertex has >= k neighbours (distinct points of the whole
// set) within distance s and the simplex itself has diameter <= s.
// An absent degree birth means the simplex never enters at that degree.
class BifilteredComplex {
  public:
    struct Entry {
        Simplex simplex;
        double rips_birth = 0.0;
        std::vector<std::optional<double>> degree_births;  // index 0..deg_cap
    };

    const MetricPoints& points() const { return points_; }
    int dim_cap() const { return dim_cap_; }
    int deg_cap() const { return deg_cap_; }
    const std::vector<Entry>& entries() const { return entries_; }

    // Simplices present at parameter s and degree k, sorted; the result is
    // downward closed.
    std::vector<Simplex> poset_at(double s, int k, double tol = kDefaultTol) const;

    friend BifilteredComplex build_rips(MetricPoints points, int dim_cap, const Budget& budget);
    friend BifilteredComplex fill_degree_births(BifilteredComplex complex, int deg_cap);

  private:
    MetricPoints points_;
    int dim_cap_ = 2;
    int deg_cap_ = -1;  // -1: only rips births present
    std::vector<Entry> entries_;
};

// All subsets of size <= dim_cap+1 with their diameters. Degree fields are
// left unfilled (deg_cap −1).
BifilteredComplex build_rips(MetricPoints points, int dim_cap = 2, const Budget& budget = {});

BifilteredComplex fill_degree_births(BifilteredComplex complex, int deg_cap = 3);

// Birth value of an arbitrary vertex set at degree k, computed directly
// from the metric (no dimension cap): max over vertices of
// max(diameter, k-th smallest distance to the rest of the point set).
// Absent when some vertex has fewer than k other points.
std::optional<double> degree_birth_of(const MetricPoints& points, const std::vector<int>& vertices,
                                      int k);

// Simplices (as sorted vertex lists) of the complex on n abstract vertices
// whose pairwise dissimilarities are given by `dist`, at threshold t, up to
// dim_cap. Shared machinery for Rips slices on plain and derived metrics.
std::vector<Simplex> threshold_slice(int n, const std::function<double(int, int)>& dist, double t,
                                     int dim_cap, double tol = kDefaultTol,
                                     const Budget& budget = {});

}  // namespace ripshom
