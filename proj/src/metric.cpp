#include "ripshom/metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace ripshom {

Budget Budget::from_env() {
    Budget b;
    if (const char* env = std::getenv("RIPS_HOMOTOPY_BUDGET")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && v > 0) {
            b.max_simplices = static_cast<std::size_t>(v);
            if (*end == ',') {
                const char* rest = end + 1;
                const unsigned long long w = std::strtoull(rest, &end, 10);
                if (end != rest && w > 0) b.max_chains = static_cast<std::size_t>(w);
            }
        }
    }
    return b;
}

MetricPoints MetricPoints::from_euclidean(const std::vector<std::vector<double>>& coords) {
    MetricPoints m;
    m.n_ = static_cast<int>(coords.size());
    if (m.n_ == 0) throw validation_error("from_euclidean: empty point set");
    const std::size_t dim = coords.front().size();
    for (const auto& c : coords) {
        if (c.size() != dim) throw validation_error("from_euclidean: ragged input");
        for (double x : c)
            if (!std::isfinite(x)) throw validation_error("from_euclidean: non-finite coordinate");
    }
    m.dist_.assign(static_cast<std::size_t>(m.n_) * m.n_, 0.0);
    for (int i = 0; i < m.n_; ++i) {
        for (int j = i + 1; j < m.n_; ++j) {
            double s = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                const double diff = coords[i][d] - coords[j][d];
                s += diff * diff;
            }
            const double v = std::sqrt(s);
            m.dist_[static_cast<std::size_t>(i) * m.n_ + j] = v;
            m.dist_[static_cast<std::size_t>(j) * m.n_ + i] = v;
        }
    }
    m.labels_.reserve(m.n_);
    for (int i = 0; i < m.n_; ++i) m.labels_.push_back(std::to_string(i));
    return m;
}

MetricPoints MetricPoints::from_distance_matrix(std::vector<std::string> labels,
                                                const std::vector<std::vector<double>>& dist,
                                                double tol) {
    MetricPoints m;
    m.n_ = static_cast<int>(dist.size());
    if (m.n_ == 0) throw validation_error("from_distance_matrix: empty matrix");
    if (labels.empty()) {
        for (int i = 0; i < m.n_; ++i) labels.push_back(std::to_string(i));
    }
    if (static_cast<int>(labels.size()) != m.n_)
        throw validation_error("from_distance_matrix: label count does not match matrix size");
    m.labels_ = std::move(labels);
    m.dist_.assign(static_cast<std::size_t>(m.n_) * m.n_, 0.0);
    for (int i = 0; i < m.n_; ++i) {
        if (static_cast<int>(dist[i].size()) != m.n_)
            throw validation_error("from_distance_matrix: matrix is not square");
        for (int j = 0; j < m.n_; ++j) {
            if (!std::isfinite(dist[i][j]))
                throw validation_error("from_distance_matrix: non-finite entry");
            m.dist_[static_cast<std::size_t>(i) * m.n_ + j] = dist[i][j];
        }
    }
    m.validate(tol);
    return m;
}

void MetricPoints::validate(double tol) const {
    for (int i = 0; i < n_; ++i) {
        if (std::abs(dist(i, i)) > tol)
            throw validation_error("metric validation: nonzero diagonal at " + std::to_string(i));
        for (int j = 0; j < n_; ++j) {
            if (dist(i, j) < -tol) throw validation_error("metric validation: negative distance");
            if (std::abs(dist(i, j) - dist(j, i)) > tol)
                throw validation_error("metric validation: asymmetric matrix");
        }
    }
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            for (int k = 0; k < n_; ++k)
                if (dist(i, k) > dist(i, j) + dist(j, k) + tol)
                    throw validation_error("metric validation: triangle inequality fails at (" +
                                           std::to_string(i) + "," + std::to_string(j) + "," +
                                           std::to_string(k) + ")");
}

double MetricPoints::max_dist() const {
    double m = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) m = std::max(m, dist(i, j));
    return m;
}

MetricPoints MetricPoints::restrict(const std::vector<int>& indices) const {
    if (indices.empty()) throw validation_error("restrict: empty index set");
    MetricPoints m;
    m.n_ = static_cast<int>(indices.size());
    m.dist_.assign(static_cast<std::size_t>(m.n_) * m.n_, 0.0);
    for (int a = 0; a < m.n_; ++a) {
        const int i = indices[a];
        if (i < 0 || i >= n_) throw validation_error("restrict: index out of range");
        m.labels_.push_back(labels_[i]);
        for (int b = 0; b < m.n_; ++b)
            m.dist_[static_cast<std::size_t>(a) * m.n_ + b] = dist(i, indices[b]);
    }
    return m;
}

SubsetPair::SubsetPair(MetricPoints ambient_, std::vector<int> members_)
    : ambient(std::move(ambient_)), members(std::move(members_)) {
    if (members.empty()) throw validation_error("SubsetPair: empty member set");
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (members[i] < 0 || members[i] >= ambient.size())
            throw validation_error("SubsetPair: member index out of range");
        if (i > 0 && members[i] <= members[i - 1])
            throw validation_error("SubsetPair: member indices must be strictly increasing");
    }
}

bool SubsetPair::is_member(int idx) const {
    return std::binary_search(members.begin(), members.end(), idx);
}

namespace {

double directed_hausdorff(const std::vector<int>& from, const std::vector<int>& to,
                          const MetricPoints& ambient) {
    double worst = 0.0;
    for (int a : from) {
        double best = std::numeric_limits<double>::infinity();
        for (int b : to) best = std::min(best, ambient.dist(a, b));
        worst = std::max(worst, best);
    }
    return worst;
}

// Kuhn's augmenting-path matching on the bipartite graph
// {(row, col) : adj[row][col]}; returns true when every row is matched.
bool rows_saturated(const std::vector<std::vector<int>>& adj, int num_cols) {
    std::vector<int> match_col(num_cols, -1);
    std::vector<char> seen;
    auto augment = [&](auto&& self, int row) -> bool {
        for (int col : adj[row]) {
            if (seen[col]) continue;
            seen[col] = 1;
            if (match_col[col] < 0 || self(self, match_col[col])) {
                match_col[col] = row;
                return true;
            }
        }
        return false;
    };
    for (std::size_t row = 0; row < adj.size(); ++row) {
        seen.assign(num_cols, 0);
        if (!augment(augment, static_cast<int>(row))) return false;
    }
    return true;
}

}  // namespace

double hausdorff(const std::vector<int>& xs, const std::vector<int>& ys,
                 const MetricPoints& ambient) {
    if (xs.empty() || ys.empty()) throw validation_error("hausdorff: empty input set");
    return std::max(directed_hausdorff(xs, ys, ambient), directed_hausdorff(ys, xs, ambient));
}

bool config_hausdorff_lt(const SubsetPair& pair, int k, double r) {
    if (r <= 0) throw validation_error("config_hausdorff_lt: r must be positive");
    if (k < 0) throw validation_error("config_hausdorff_lt: k must be non-negative");
    const int ny = pair.ambient.size();
    const int nx = static_cast<int>(pair.members.size());
    if (ny < k + 1) return true;   // both tuple sets empty
    if (nx < k + 1) return false;  // Y-side tuples exist, X-side has none

    // Ordered distinct tuples under the max product metric reduce to
    // (k+1)-subsets: a Y-subset S admits an X-tuple within r iff the
    // bipartite graph {(y, x) : d(y, x) < r} has a matching saturating S.
    std::vector<std::vector<int>> near(ny);
    for (int y = 0; y < ny; ++y)
        for (int xi = 0; xi < nx; ++xi)
            if (pair.ambient.dist(y, pair.members[xi]) < r) near[y].push_back(xi);

    std::vector<int> subset(k + 1);
    std::vector<std::vector<int>> adj(k + 1);
    auto choose = [&](auto&& self, int next, int depth) -> bool {
        if (depth == k + 1) {
            for (int i = 0; i <= k; ++i) adj[i] = near[subset[i]];
            return rows_saturated(adj, nx);
        }
        for (int y = next; y < ny; ++y) {
            subset[depth] = y;
            if (!self(self, y + 1, depth + 1)) return false;
        }
        return true;
    };
    return choose(choose, 0, 0);
}

bool hausdorff_union_lt(const std::vector<int>& xs, const std::vector<int>& ys,
                        const MetricPoints& ambient, double r) {
    std::vector<int> inter;
    for (int x : xs)
        if (std::find(ys.begin(), ys.end(), x) != ys.end()) inter.push_back(x);
    if (inter.empty()) throw validation_error("hausdorff_union_lt: X ∩ Y is empty");
    std::vector<int> uni = xs;
    for (int y : ys)
        if (std::find(uni.begin(), uni.end(), y) == uni.end()) uni.push_back(y);
    std::sort(uni.begin(), uni.end());
    return hausdorff(ys, uni, ambient) < r;
}

}  // namespace ripshom
