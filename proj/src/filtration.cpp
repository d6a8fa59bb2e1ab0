#include "ripshom/filtration.hpp"

#include <algorithm>
#include <cmath>

namespace ripshom {

bool simplex_less(const Simplex& a, const Simplex& b) {
    if (a.v.size() != b.v.size()) return a.v.size() < b.v.size();
    return a.v < b.v;
}

PhaseGrid phase_grid(const MetricPoints& points, double tol) {
    std::vector<double> vals{0.0};
    for (int i = 0; i < points.size(); ++i)
        for (int j = i + 1; j < points.size(); ++j) vals.push_back(points.dist(i, j));
    std::sort(vals.begin(), vals.end());
    PhaseGrid grid;
    for (double v : vals)
        if (grid.values.empty() || v - grid.values.back() > tol) grid.values.push_back(v);
    return grid;
}

std::vector<Simplex> threshold_slice(int n, const std::function<double(int, int)>& dist, double t,
                                     int dim_cap, double tol, const Budget& budget) {
    std::vector<Simplex> out;
    std::vector<int> cur;
    // Depth-first subset growth; a subset is extendable by w only when w is
    // within t of every current vertex, which keeps the enumeration at the
    // size of the output.
    auto grow = [&](auto&& self, int next) -> void {
        for (int w = next; w < n; ++w) {
            bool ok = true;
            for (int u : cur)
                if (dist(u, w) > t + tol) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            cur.push_back(w);
            if (out.size() >= budget.max_simplices)
                throw budget_error("threshold_slice: simplex budget exceeded");
            out.push_back(Simplex{cur});
            if (static_cast<int>(cur.size()) <= dim_cap) self(self, w + 1);
            cur.pop_back();
        }
    };
    grow(grow, 0);
    std::sort(out.begin(), out.end(), simplex_less);
    return out;
}

BifilteredComplex build_rips(MetricPoints points, int dim_cap, const Budget& budget) {
    if (dim_cap < 0) throw validation_error("build_rips: dim_cap must be >= 0");
    BifilteredComplex c;
    c.points_ = std::move(points);
    c.dim_cap_ = dim_cap;
    const auto& pts = c.points_;
    auto dist = [&pts](int i, int j) { return pts.dist(i, j); };
    const double t = pts.max_dist();
    for (auto& s : threshold_slice(pts.size(), dist, t, dim_cap, kDefaultTol, budget)) {
        double diam = 0.0;
        for (std::size_t a = 0; a < s.v.size(); ++a)
            for (std::size_t b = a + 1; b < s.v.size(); ++b)
                diam = std::max(diam, pts.dist(s.v[a], s.v[b]));
        c.entries_.push_back({std::move(s), diam, {}});
    }
    return c;
}

std::optional<double> degree_birth_of(const MetricPoints& points, const std::vector<int>& vertices,
                                      int k) {
    if (k >= points.size()) return std::nullopt;  // fewer than k other points
    double birth = 0.0;
    for (std::size_t a = 0; a < vertices.size(); ++a)
        for (std::size_t b = a + 1; b < vertices.size(); ++b)
            birth = std::max(birth, points.dist(vertices[a], vertices[b]));
    if (k == 0) return birth;
    std::vector<double> row;
    row.reserve(points.size() - 1);
    for (int x : vertices) {
        row.clear();
        for (int y = 0; y < points.size(); ++y)
            if (y != x) row.push_back(points.dist(x, y));
        std::nth_element(row.begin(), row.begin() + (k - 1), row.end());
        birth = std::max(birth, row[k - 1]);
    }
    return birth;
}

BifilteredComplex fill_degree_births(BifilteredComplex complex, int deg_cap) {
    if (deg_cap < 0) throw validation_error("fill_degree_births: deg_cap must be >= 0");
    complex.deg_cap_ = deg_cap;
    const auto& pts = complex.points_;

    // Per-vertex sorted distance rows; vertex_degree_birth[x][k-1] is the
    // k-th smallest distance from x to the rest of the set.
    std::vector<std::vector<double>> sorted_rows(pts.size());
    for (int x = 0; x < pts.size(); ++x) {
        for (int y = 0; y < pts.size(); ++y)
            if (y != x) sorted_rows[x].push_back(pts.dist(x, y));
        std::sort(sorted_rows[x].begin(), sorted_rows[x].end());
    }

    for (auto& e : complex.entries_) {
        e.degree_births.assign(deg_cap + 1, std::nullopt);
        e.degree_births[0] = e.rips_birth;
        for (int k = 1; k <= deg_cap; ++k) {
            if (k >= pts.size()) break;  // stays absent
            double birth = e.rips_birth;
            for (int x : e.simplex.v) birth = std::max(birth, sorted_rows[x][k - 1]);
            e.degree_births[k] = birth;
        }
    }
    return complex;
}

std::vector<Simplex> BifilteredComplex::poset_at(double s, int k, double tol) const {
    if (k < 0) throw validation_error("poset_at: k must be non-negative");
    if (k > 0 && k > deg_cap_) throw validation_error("poset_at: k exceeds deg_cap");
    std::vector<Simplex> out;
    for (const auto& e : entries_) {
        const std::optional<double> birth =
            (k == 0) ? std::optional<double>(e.rips_birth) : e.degree_births[k];
        if (birth && *birth <= s + tol) out.push_back(e.simplex);
    }
    return out;  // entries_ are already sorted
}

}  // namespace ripshom
