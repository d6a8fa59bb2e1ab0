#include "ripshom/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ripshom {

std::vector<int> Retraction::image(const std::vector<int>& simplex) const {
    std::vector<int> out;
    out.reserve(simplex.size());
    for (int y : simplex) {
        if (!defined_at(y))
            throw inconsistency_error("Retraction::image: vertex outside the domain");
        out.push_back(map[y]);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Retraction build_retraction(const SubsetPair& pair, double r, TieRule tie) {
    std::vector<int> all(pair.ambient.size());
    for (int i = 0; i < pair.ambient.size(); ++i) all[i] = i;
    if (!(hausdorff(pair.members, all, pair.ambient) < r))
        throw validation_error("build_retraction: hypothesis d_H(X, Y) < r fails");

    Retraction theta;
    theta.r = r;
    theta.k = 0;
    theta.map.assign(pair.ambient.size(), -1);
    for (int y = 0; y < pair.ambient.size(); ++y) {
        if (pair.is_member(y)) {
            theta.map[y] = y;
            continue;
        }
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int x : pair.members) {
            const double d = pair.ambient.dist(y, x);
            const bool closer =
                d < best_d || (d == best_d && tie == TieRule::GreatestIndex && x > best);
            if (closer) {
                best = x;
                best_d = d;
            }
        }
        if (!(best_d < r))
            throw inconsistency_error("build_retraction: no member within r despite hypothesis");
        theta.map[y] = best;
    }
    return theta;
}

namespace {

// Vertices of the degree-k slice over a set of candidate ambient points,
// measured inside the member space when restrict_to_members is set.
bool is_degree_vertex(const MetricPoints& ambient, const std::vector<int>& universe, int v, int k,
                      double s, double tol) {
    int neighbours = 0;
    for (int u : universe) {
        if (u == v) continue;
        if (ambient.dist(v, u) <= s + tol) ++neighbours;
    }
    return neighbours >= k;
}

// First ordered distinct member tuple (x_0..x_k) with d(y_i, x_i) < r, in
// lexicographic order (or reverse-lexicographic under GreatestIndex).
std::vector<int> matched_member_tuple(const SubsetPair& pair, const std::vector<int>& y_tuple,
                                      double r, TieRule tie) {
    std::vector<int> candidates = pair.members;
    if (tie == TieRule::GreatestIndex) std::reverse(candidates.begin(), candidates.end());
    const int len = static_cast<int>(y_tuple.size());
    std::vector<int> chosen;
    std::vector<char> used(pair.ambient.size(), 0);
    auto search = [&](auto&& self, int depth) -> bool {
        if (depth == len) return true;
        for (int x : candidates) {
            if (used[x] || !(pair.ambient.dist(y_tuple[depth], x) < r)) continue;
            used[x] = 1;
            chosen.push_back(x);
            if (self(self, depth + 1)) return true;
            chosen.pop_back();
            used[x] = 0;
        }
        return false;
    };
    if (!search(search, 0)) return {};
    return chosen;
}

}  // namespace

Retraction build_degree_retraction(const SubsetPair& pair, int k, double s, double r,
                                   TieRule tie) {
    if (k == 0) return build_retraction(pair, r, tie);
    if (!config_hausdorff_lt(pair, k, r))
        throw validation_error(
            "build_degree_retraction: configuration hypothesis d_H(X^{k+1}, Y^{k+1}) < r fails");

    const double tol = kDefaultTol;
    std::vector<int> all(pair.ambient.size());
    for (int i = 0; i < pair.ambient.size(); ++i) all[i] = i;

    Retraction theta;
    theta.r = r;
    theta.k = k;
    theta.map.assign(pair.ambient.size(), -1);
    for (int y = 0; y < pair.ambient.size(); ++y) {
        if (!is_degree_vertex(pair.ambient, all, y, k, s, tol)) continue;  // not in the Y slice
        if (pair.is_member(y) && is_degree_vertex(pair.ambient, pair.members, y, k, s, tol)) {
            theta.map[y] = y;  // vertex of the X slice stays put
            continue;
        }
        // neighbours of y within s, canonical order per the tie rule
        std::vector<int> neighbours;
        for (int u = 0; u < pair.ambient.size(); ++u)
            if (u != y && pair.ambient.dist(y, u) <= s + tol) neighbours.push_back(u);
        if (tie == TieRule::GreatestIndex) std::reverse(neighbours.begin(), neighbours.end());
        std::vector<int> y_tuple{y};
        for (int i = 0; i < k; ++i) y_tuple.push_back(neighbours[i]);

        auto matched = matched_member_tuple(pair, y_tuple, r, tie);
        if (matched.empty())
            throw inconsistency_error(
                "build_degree_retraction: no matched tuple despite satisfied hypothesis");
        theta.map[y] = matched.front();
        if (!(pair.ambient.dist(y, theta.map[y]) < r))
            throw inconsistency_error("build_degree_retraction: retraction moved farther than r");
    }
    return theta;
}

namespace {

// Membership of an arbitrary ambient vertex set in the degree-k slice of Y
// at parameter t, computed directly from the metric (no dimension cap).
bool in_ambient_slice(const MetricPoints& ambient, const std::vector<int>& vertices, int k,
                      double t, double tol) {
    auto birth = degree_birth_of(ambient, vertices, k);
    return birth && *birth <= t + tol;
}

// Same for the member space: vertices must all be members; distances and
// neighbour counts are taken inside X.
bool in_member_slice(const SubsetPair& pair, const MetricPoints& member_space,
                     const std::vector<int>& vertices, int k, double t, double tol) {
    std::vector<int> local;
    local.reserve(vertices.size());
    for (int v : vertices) {
        auto it = std::lower_bound(pair.members.begin(), pair.members.end(), v);
        if (it == pair.members.end() || *it != v) return false;
        local.push_back(static_cast<int>(it - pair.members.begin()));
    }
    auto birth = degree_birth_of(member_space, local, k);
    return birth && *birth <= t + tol;
}

}  // namespace

InterleavingCertificate verify_interleaving(const SubsetPair& pair, double r, int k, int dim_cap,
                                            double tol, TieRule tie, const Budget& budget) {
    if (k == 0) {
        std::vector<int> all(pair.ambient.size());
        for (int i = 0; i < pair.ambient.size(); ++i) all[i] = i;
        if (!(hausdorff(pair.members, all, pair.ambient) < r))
            throw validation_error("verify_interleaving: hypothesis d_H(X, Y) < r fails");
    } else if (!config_hausdorff_lt(pair, k, r)) {
        throw validation_error("verify_interleaving: configuration hypothesis fails");
    }

    InterleavingCertificate cert;
    cert.r = r;
    cert.k = k;
    cert.grid = phase_grid(pair.ambient, tol);

    auto complex = build_rips(pair.ambient, dim_cap, budget);
    if (k > 0) complex = fill_degree_births(std::move(complex), k);
    const MetricPoints member_space = pair.member_space();

    cert.overall = true;
    for (double s : cert.grid.values) {
        const Retraction theta = build_degree_retraction(pair, k, s, r, tie);
        InterleavingCertificate::GridCheck check;
        check.s = s;
        check.theta_lands = true;
        check.upper_commutes = true;
        check.union_witness = true;

        for (const auto& tau : complex.poset_at(s, k, tol)) {
            const auto image = theta.image(tau.v);

            // lands in the shifted member slice
            if (!in_member_slice(pair, member_space, image, k, s + 2 * r, tol))
                check.theta_lands = false;

            // fixes the unshifted member slice elementwise
            if (in_member_slice(pair, member_space, tau.v, k, s, tol) && image != tau.v)
                check.upper_commutes = false;

            // the union witness lives in the shifted ambient slice
            std::vector<int> united = tau.v;
            united.insert(united.end(), image.begin(), image.end());
            std::sort(united.begin(), united.end());
            united.erase(std::unique(united.begin(), united.end()), united.end());
            if (!in_ambient_slice(pair.ambient, united, k, s + 2 * r, tol))
                check.union_witness = false;
        }
        cert.overall = cert.overall && check.theta_lands && check.upper_commutes &&
                       check.union_witness;
        cert.checks.push_back(check);
    }
    return cert;
}

CrossmapVerdict crossmap_stability_check(const MetricPoints& xs, const MetricPoints& ys,
                                         const std::vector<std::vector<double>>& cross_dist,
                                         double r, double s, int p, int max_k,
                                         const CrossmapLimits& limits, double tol,
                                         const Budget& budget) {
    if (xs.size() > limits.max_points || ys.size() > limits.max_points)
        throw budget_error("crossmap_stability_check: point budget exceeded");
    if (static_cast<int>(cross_dist.size()) != xs.size())
        throw validation_error("crossmap_stability_check: cross matrix has wrong row count");
    for (const auto& row : cross_dist)
        if (static_cast<int>(row.size()) != ys.size())
            throw validation_error("crossmap_stability_check: cross matrix has wrong column count");

    // hypothesis d_H(X, Y) < r on the cross distances
    double dh = 0.0;
    for (int i = 0; i < xs.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < ys.size(); ++j) best = std::min(best, cross_dist[i][j]);
        dh = std::max(dh, best);
    }
    for (int j = 0; j < ys.size(); ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < xs.size(); ++i) best = std::min(best, cross_dist[i][j]);
        dh = std::max(dh, best);
    }
    if (!(dh < r)) throw validation_error("crossmap_stability_check: hypothesis d_H(X, Y) < r fails");

    // correspondence set
    std::vector<std::pair<int, int>> us;
    for (int i = 0; i < xs.size(); ++i)
        for (int j = 0; j < ys.size(); ++j)
            if (cross_dist[i][j] < r) us.emplace_back(i, j);
    const int nu = static_cast<int>(us.size());

    auto x_side = [&](int a, int b) { return xs.dist(us[a].first, us[b].first); };
    auto y_side = [&](int a, int b) { return ys.dist(us[a].second, us[b].second); };
    const int dim_cap = limits.dim_cap;

    auto u_slice = [&](auto&& metric, double t) {
        return ComplexSlice::from_simplices(nu, threshold_slice(nu, metric, t, dim_cap, tol, budget),
                                            false);
    };
    auto point_slice = [&](const MetricPoints& m, double t) {
        auto metric = [&m](int a, int b) { return m.dist(a, b); };
        return ComplexSlice::from_simplices(m.size(),
                                            threshold_slice(m.size(), metric, t, dim_cap, tol, budget),
                                            false);
    };

    const ComplexSlice ux_s = u_slice(x_side, s);
    const ComplexSlice uy_s = u_slice(y_side, s);
    const ComplexSlice uy_s2 = u_slice(y_side, s + 2 * r);
    const ComplexSlice ux_s4 = u_slice(x_side, s + 4 * r);
    const ComplexSlice x_s = point_slice(xs, s);
    const ComplexSlice y_s = point_slice(ys, s);
    const ComplexSlice y_s2 = point_slice(ys, s + 2 * r);
    const ComplexSlice x_s4 = point_slice(xs, s + 4 * r);

    std::vector<int> proj_x(nu), proj_y(nu), identity_u(nu);
    for (int a = 0; a < nu; ++a) {
        proj_x[a] = us[a].first;
        proj_y[a] = us[a].second;
        identity_u[a] = a;
    }

    HomologyBasis h_ux_s(ux_s, p, max_k), h_uy_s(uy_s, p, max_k), h_uy_s2(uy_s2, p, max_k),
        h_ux_s4(ux_s4, p, max_k), h_x_s(x_s, p, max_k), h_y_s(y_s, p, max_k),
        h_y_s2(y_s2, p, max_k), h_x_s4(x_s4, p, max_k);

    CrossmapVerdict verdict;
    verdict.overall = true;
    for (int kk = 0; kk <= max_k; ++kk) {
        CrossmapVerdict::PerDegree row;
        row.degree = kk;

        const FpMatrix px_s = vertex_map_homology(h_ux_s, h_x_s, proj_x, kk);
        const FpMatrix py_s = vertex_map_homology(h_uy_s, h_y_s, proj_y, kk);
        const FpMatrix py_s2 = vertex_map_homology(h_uy_s2, h_y_s2, proj_y, kk);
        const FpMatrix px_s4 = vertex_map_homology(h_ux_s4, h_x_s4, proj_x, kk);

        auto invertible = [](const FpMatrix& m) {
            return m.rows() == m.cols() && m.rank() == m.rows();
        };
        row.projections_iso =
            invertible(px_s) && invertible(py_s) && invertible(py_s2) && invertible(px_s4);

        if (row.projections_iso) {
            const FpMatrix incl1 = vertex_map_homology(h_ux_s, h_uy_s2, identity_u, kk);
            const FpMatrix incl2 = vertex_map_homology(h_uy_s2, h_ux_s4, identity_u, kk);
            std::vector<int> id_x(xs.size());
            for (int i = 0; i < xs.size(); ++i) id_x[i] = i;
            const FpMatrix sigma = vertex_map_homology(h_x_s, h_x_s4, id_x, kk);

            // Φ = (p_Y)_* incl1 (p_X)^{-1}, Ψ = (p_X')_* incl2 (p_Y')^{-1}
            const FpMatrix phi = py_s2.multiply(incl1).multiply(px_s.inverse());
            const FpMatrix psi = px_s4.multiply(incl2).multiply(py_s2.inverse());
            row.composite_equals_shift = psi.multiply(phi) == sigma;
        }
        verdict.overall = verdict.overall && row.projections_iso && row.composite_equals_shift;
        verdict.degrees.push_back(row);
    }
    return verdict;
}

bool phase_gap_check(const SubsetPair& pair, int k, double r, int gap_index, int dim_cap,
                     int max_k, double tol, const Budget& budget) {
    if (!config_hausdorff_lt(pair, k, r))
        throw validation_error("phase_gap_check: configuration hypothesis fails");
    const PhaseGrid grid = phase_grid(pair.ambient, tol);
    if (gap_index < 0 || gap_index + 1 >= grid.size())
        throw validation_error("phase_gap_check: gap index out of range");
    const double s = grid.values[gap_index];
    if (!(2 * r < grid.values[gap_index + 1] - s))
        throw validation_error("phase_gap_check: gap hypothesis 2r < s_{i+1} - s_i fails");

    // degree-k slices of both sides at s, in ambient vertex numbering
    auto ambient_complex = build_rips(pair.ambient, dim_cap, budget);
    if (k > 0) ambient_complex = fill_degree_births(std::move(ambient_complex), k);
    const ComplexSlice big = ComplexSlice::from_simplices(
        pair.ambient.size(), ambient_complex.poset_at(s, k, tol), false);

    const MetricPoints member_space = pair.member_space();
    auto member_complex = build_rips(member_space, dim_cap, budget);
    if (k > 0) member_complex = fill_degree_births(std::move(member_complex), k);
    std::vector<Simplex> lifted;
    for (const auto& sx : member_complex.poset_at(s, k, tol)) {
        Simplex t;
        for (int v : sx.v) t.v.push_back(pair.members[v]);
        lifted.push_back(std::move(t));
    }
    const ComplexSlice small =
        ComplexSlice::from_simplices(pair.ambient.size(), std::move(lifted), false);

    // components must correspond bijectively
    const auto small_classes = pi0(small);
    const auto big_classes = pi0(big);
    if (small_classes.size() != big_classes.size()) return false;
    std::vector<int> big_class_of(pair.ambient.size(), -1);
    for (std::size_t c = 0; c < big_classes.size(); ++c)
        for (int v : big_classes[c]) big_class_of[v] = static_cast<int>(c);
    std::vector<char> hit(big_classes.size(), 0);
    for (const auto& cls : small_classes) {
        const int target = big_class_of[cls.front()];
        if (target < 0 || hit[target]) return false;
        for (int v : cls)
            if (big_class_of[v] != target) return false;
        hit[target] = 1;
    }

    // homology isomorphisms over GF(2) and GF(3)
    for (int p : {2, 3})
        for (int kk = 0; kk <= max_k; ++kk) {
            const FpMatrix m = induced_homology_map(small, big, p, kk);
            if (m.rows() != m.cols() || m.rank() != m.rows()) return false;
        }

    // matched components have equal loop-group abelianizations
    for (const auto& cls : small_classes) {
        const auto small_inv = abelianized_pi1(groupoid_presentation(small, cls.front()));
        const auto big_inv = abelianized_pi1(groupoid_presentation(big, cls.front()));
        if (!(small_inv == big_inv)) return false;
    }
    return true;
}

}  // namespace ripshom
