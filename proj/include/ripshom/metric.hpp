#pragma once

#include <string>
#include <vector>

#include "ripshom/common.hpp"

namespace ripshom {

// A finite labeled point set with its exact pairwise distance matrix.
// Immutable after construction; metric axioms (symmetry, zero diagonal,
// triangle inequality) are validated with absolute tolerance `tol` and a
// violation is a hard error.
class MetricPoints {
  public:
    MetricPoints() = default;

    static MetricPoints from_euclidean(const std::vector<std::vector<double>>& coords);
    static MetricPoints from_distance_matrix(std::vector<std::string> labels,
                                             const std::vector<std::vector<double>>& dist,
                                             double tol = kDefaultTol);

    int size() const { return n_; }
    double dist(int i, int j) const { return dist_[static_cast<std::size_t>(i) * n_ + j]; }
    const std::vector<std::string>& labels() const { return labels_; }

    // Largest pairwise distance (0 for a single point).
    double max_dist() const;

    // Sub-metric space on the given sorted index set; labels carried over.
    MetricPoints restrict(const std::vector<int>& indices) const;

  private:
    int n_ = 0;
    std::vector<std::string> labels_;
    std::vector<double> dist_;  // row-major n x n

    void validate(double tol) const;
};

// An inclusion X ⊂ Y of data sets: `ambient` is Y, `members` the sorted
// index set identifying X.
struct SubsetPair {
    MetricPoints ambient;
    std::vector<int> members;

    SubsetPair(MetricPoints ambient_, std::vector<int> members_);

    bool is_member(int idx) const;
    MetricPoints member_space() const { return ambient.restrict(members); }
};

// Exact Hausdorff distance between two non-empty index sets of `ambient`:
// max of the two directed nearest-point distances.
double hausdorff(const std::vector<int>& xs, const std::vector<int>& ys,
                 const MetricPoints& ambient);

// Distance condition on configuration spaces: decides whether every
// (k+1)-tuple of distinct Y-points is within coordinatewise distance < r
// (max metric on tuples) of a (k+1)-tuple of distinct X-points, and
// conversely. With X ⊂ Y the converse direction is automatic, and the
// tuple condition reduces to a perfect-matching test (Hall's condition)
// for each (k+1)-subset of Y against {x : d(y,x) < r}.
//
// Empty-side conventions: if both configuration sets are empty the result
// is true; if only the X-side is empty it is false.
bool config_hausdorff_lt(const SubsetPair& pair, int k, double r);

// Whether d_H(Y, X ∪ Y) < r. Requires X ∩ Y non-empty; property tests
// pair this with the hypothesis d_H(X ∩ Y, X) < r.
bool hausdorff_union_lt(const std::vector<int>& xs, const std::vector<int>& ys,
                        const MetricPoints& ambient, double r);

}  // namespace ripshom
