#include "support.hpp"

#include <numeric>
#include <set>

namespace testsupport {

using ripshom::ComplexSlice;
using ripshom::MetricPoints;
using ripshom::Simplex;
using ripshom::SubsetPair;

namespace {

// next ordered distinct tuple of indices drawn from `pool`
bool next_tuple(std::vector<int>& pos, int pool) {
    const int k = static_cast<int>(pos.size());
    for (int i = k - 1; i >= 0; --i) {
        if (++pos[i] < pool) {
            for (int j = i + 1; j < k; ++j) pos[j] = 0;
            return true;
        }
    }
    return false;
}

bool distinct(const std::vector<int>& tuple) {
    std::set<int> s(tuple.begin(), tuple.end());
    return s.size() == tuple.size();
}

}  // namespace

bool brute_config_lt(const SubsetPair& pair, int k, double r) {
    const int ny = pair.ambient.size();
    const int nx = static_cast<int>(pair.members.size());
    const int len = k + 1;

    auto matched = [&](const std::vector<int>& from, const std::vector<int>& from_ids,
                       const std::vector<int>& to_ids) {
        // search all ordered distinct tuples of `to_ids` within r coordinatewise
        std::vector<int> pos(len, 0);
        do {
            if (!distinct(pos)) continue;
            bool ok = true;
            for (int i = 0; i < len && ok; ++i)
                if (pair.ambient.dist(from_ids[from[i]], to_ids[pos[i]]) >= r) ok = false;
            if (ok) return true;
        } while (next_tuple(pos, static_cast<int>(to_ids.size())));
        return false;
    };

    std::vector<int> all_y(ny);
    std::iota(all_y.begin(), all_y.end(), 0);

    const bool y_side_empty = ny < len;
    const bool x_side_empty = nx < len;
    if (y_side_empty) return x_side_empty;
    if (x_side_empty) return false;

    // Y-tuples need X-matches; X-tuples are Y-tuples themselves (X ⊂ Y).
    std::vector<int> pos(len, 0);
    do {
        if (!distinct(pos)) continue;
        if (!matched(pos, all_y, pair.members)) return false;
    } while (next_tuple(pos, ny));
    return true;
}

std::vector<Simplex> brute_rips_slice(const MetricPoints& m, double t, int dim_cap, double tol) {
    std::vector<Simplex> out;
    const int n = m.size();
    // enumerate every subset by bitmask, keep small diameters
    for (uint64_t mask = 1; mask < (uint64_t(1) << n); ++mask) {
        std::vector<int> vs;
        for (int i = 0; i < n; ++i)
            if (mask & (uint64_t(1) << i)) vs.push_back(i);
        if (static_cast<int>(vs.size()) > dim_cap + 1) continue;
        bool ok = true;
        for (std::size_t a = 0; a < vs.size() && ok; ++a)
            for (std::size_t b = a + 1; b < vs.size() && ok; ++b)
                if (m.dist(vs[a], vs[b]) > t + tol) ok = false;
        if (ok) out.push_back(Simplex{vs});
    }
    std::sort(out.begin(), out.end(), ripshom::simplex_less);
    return out;
}

std::vector<Simplex> brute_degree_slice(const MetricPoints& m, double t, int k, int dim_cap,
                                        double tol) {
    std::vector<Simplex> out;
    for (const auto& s : brute_rips_slice(m, t, dim_cap, tol)) {
        bool ok = true;
        for (int x : s.v) {
            int neighbours = 0;
            for (int y = 0; y < m.size(); ++y)
                if (y != x && m.dist(x, y) <= t + tol) ++neighbours;
            if (neighbours < k) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(s);
    }
    return out;
}

std::vector<std::vector<int>> brute_components(const ComplexSlice& slice) {
    std::vector<int> verts = slice.vertices();
    std::vector<std::pair<int, int>> edges;
    for (const auto& s : slice.simplices)
        if (s.v.size() == 2) edges.emplace_back(s.v[0], s.v[1]);

    std::vector<int> cls(slice.vertex_count, -1);
    for (std::size_t i = 0; i < verts.size(); ++i) cls[verts[i]] = verts[i];
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto [a, b] : edges) {
            const int m = std::min(cls[a], cls[b]);
            if (cls[a] != m || cls[b] != m) {
                cls[a] = cls[b] = m;
                changed = true;
            }
        }
    }
    std::vector<std::vector<int>> out;
    for (int rep : verts) {
        if (cls[rep] != rep) continue;
        std::vector<int> members;
        for (int v : verts)
            if (cls[v] == rep) members.push_back(v);
        out.push_back(members);
    }
    return out;
}

ComplexSlice random_slice(Rng& rng, int max_vertices, int max_simplices) {
    const int n = rng.between(1, max_vertices);
    std::set<std::vector<int>> closed;
    for (int v = 0; v < n; ++v) closed.insert({v});

    auto close_downward = [&closed](const std::vector<int>& s) {
        // insert s and all its non-empty subsets
        const int m = static_cast<int>(s.size());
        for (uint64_t mask = 1; mask < (uint64_t(1) << m); ++mask) {
            std::vector<int> sub;
            for (int i = 0; i < m; ++i)
                if (mask & (uint64_t(1) << i)) sub.push_back(s[i]);
            closed.insert(sub);
        }
    };

    const int attempts = n >= 2 ? rng.between(0, 2 * n) : 0;
    for (int t = 0; t < attempts; ++t) {
        const int size = rng.between(2, std::min(3, n));
        std::vector<int> s;
        while (static_cast<int>(s.size()) < size) {
            const int v = rng.below(n);
            if (std::find(s.begin(), s.end(), v) == s.end()) s.push_back(v);
        }
        std::sort(s.begin(), s.end());
        close_downward(s);
        if (static_cast<int>(closed.size()) > max_simplices) break;
    }
    // trim back to the cap by dropping largest simplices first
    std::vector<Simplex> simplices;
    for (const auto& v : closed) simplices.push_back(Simplex{v});
    std::sort(simplices.begin(), simplices.end(), ripshom::simplex_less);
    while (static_cast<int>(simplices.size()) > max_simplices && simplices.back().dim() > 0)
        simplices.pop_back();
    return ComplexSlice::from_simplices(n, std::move(simplices), true);
}

ComplexSlice projective_plane_slice() {
    // Minimal 6-vertex triangulation (antipodal icosahedron quotient);
    // every edge of K6 lies in exactly two triangles, H1 = Z/2.
    const std::vector<std::vector<int>> triangles = {
        {0, 1, 2}, {0, 2, 3}, {0, 1, 5}, {0, 3, 4}, {0, 4, 5},
        {1, 2, 4}, {1, 3, 4}, {1, 3, 5}, {2, 3, 5}, {2, 4, 5},
    };
    std::vector<Simplex> simplices;
    for (auto& t : triangles) {
        simplices.push_back(Simplex{t});
        simplices.push_back(Simplex{{t[0], t[1]}});
        simplices.push_back(Simplex{{t[0], t[2]}});
        simplices.push_back(Simplex{{t[1], t[2]}});
        simplices.push_back(Simplex{{t[0]}});
        simplices.push_back(Simplex{{t[1]}});
        simplices.push_back(Simplex{{t[2]}});
    }
    return ComplexSlice::from_simplices(6, std::move(simplices), true);
}

ComplexSlice wedge_of_two_squares_slice() {
    // two 4-cycles sharing vertex 0; free rank 2
    std::vector<Simplex> s;
    for (int v = 0; v < 7; ++v) s.push_back(Simplex{{v}});
    const std::vector<std::vector<int>> edges = {{0, 1}, {1, 2}, {2, 3}, {0, 3},
                                                 {0, 4}, {4, 5}, {5, 6}, {0, 6}};
    for (auto& e : edges) s.push_back(Simplex{e});
    return ComplexSlice::from_simplices(7, std::move(s), true);
}

ComplexSlice torus_slice() {
    // 7-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7
    std::vector<Simplex> simplices;
    for (int v = 0; v < 7; ++v) simplices.push_back(Simplex{{v}});
    auto add = [&simplices](int a, int b, int c) {
        std::vector<int> t{a % 7, b % 7, c % 7};
        std::sort(t.begin(), t.end());
        simplices.push_back(Simplex{t});
        simplices.push_back(Simplex{{t[0], t[1]}});
        simplices.push_back(Simplex{{t[0], t[2]}});
        simplices.push_back(Simplex{{t[1], t[2]}});
    };
    for (int i = 0; i < 7; ++i) {
        add(i, i + 1, i + 3);
        add(i, i + 2, i + 3);
    }
    return ComplexSlice::from_simplices(7, std::move(simplices), true);
}

ComplexSlice projective_plane_wedge_circle_slice() {
    // the 6-vertex projective plane with a triangle loop hung on vertex 0
    auto base = projective_plane_slice();
    auto simplices = base.simplices;
    simplices.push_back(Simplex{{6}});
    simplices.push_back(Simplex{{7}});
    simplices.push_back(Simplex{{0, 6}});
    simplices.push_back(Simplex{{6, 7}});
    simplices.push_back(Simplex{{0, 7}});
    return ComplexSlice::from_simplices(8, std::move(simplices), true);
}

using ripshom::FpMatrix;
using ripshom::PhaseGrid;
using ripshom::SetSystem;
using ripshom::SetSystemMap;
using ripshom::VecSystem;
using ripshom::VecSystemMap;

PhaseGrid integer_grid(int levels) {
    PhaseGrid grid;
    for (int i = 0; i < levels; ++i) grid.values.push_back(i);
    return grid;
}

SetSystem random_set_system(Rng& rng, int levels, int max_size) {
    SetSystem sys;
    sys.grid = integer_grid(levels);
    for (int i = 0; i < levels; ++i) sys.sizes.push_back(rng.between(1, max_size));
    for (int i = 0; i + 1 < levels; ++i) {
        std::vector<int> step(sys.sizes[i]);
        for (auto& v : step) v = rng.below(sys.sizes[i + 1]);
        sys.steps.push_back(std::move(step));
    }
    sys.validate();
    return sys;
}

SetSystemMap random_set_map_from(Rng& rng, const SetSystem& source, int max_extra) {
    const int levels = source.levels();

    // Step-compatible partitions: random merges per level, closed forward so
    // that equivalent elements stay equivalent along the steps. The target
    // is the quotient plus an independent remainder, which makes both
    // predicate directions fail or hold at varying shifts. Half the maps
    // are built "eventually iso": merges are restricted to elements whose
    // orbits meet at the terminal level and the remainder dies out, which
    // guarantees a finite isomorphism radius.
    const bool eventually_iso = rng.below(2) == 0;
    std::vector<std::vector<int>> parent(levels);
    for (int i = 0; i < levels; ++i) {
        parent[i].resize(source.sizes[i]);
        std::iota(parent[i].begin(), parent[i].end(), 0);
    }
    auto find = [&](int i, int v) {
        while (parent[i][v] != v) {
            parent[i][v] = parent[i][parent[i][v]];
            v = parent[i][v];
        }
        return v;
    };
    auto unite = [&](int i, int a, int b) {
        a = find(i, a);
        b = find(i, b);
        if (a != b) parent[i][std::max(a, b)] = std::min(a, b);
    };
    for (int i = 0; i < levels; ++i) {
        if (eventually_iso && i + 1 == levels) break;  // terminal level stays discrete
        const auto to_last = source.transition(i, levels - 1);
        const int merges = rng.between(0, source.sizes[i]);
        for (int m = 0; m < merges; ++m) {
            const int a = rng.below(source.sizes[i]);
            const int b = rng.below(source.sizes[i]);
            if (eventually_iso && to_last[a] != to_last[b]) continue;
            unite(i, a, b);
        }
    }
    for (int i = 0; i + 1 < levels; ++i)
        for (int a = 0; a < source.sizes[i]; ++a)
            for (int b = a + 1; b < source.sizes[i]; ++b)
                if (find(i, a) == find(i, b)) unite(i + 1, source.steps[i][a], source.steps[i][b]);

    std::vector<std::vector<int>> class_of(levels);
    std::vector<int> class_count(levels, 0);
    for (int i = 0; i < levels; ++i) {
        class_of[i].assign(source.sizes[i], -1);
        for (int v = 0; v < source.sizes[i]; ++v) {
            const int root = find(i, v);
            if (class_of[i][root] < 0) class_of[i][root] = class_count[i]++;
            class_of[i][v] = class_of[i][root];
        }
    }

    SetSystem target;
    target.grid = source.grid;
    std::vector<int> extra(levels);
    for (int i = 0; i < levels; ++i) {
        extra[i] = (eventually_iso && i + 1 == levels) ? 0 : rng.between(0, max_extra);
        target.sizes.push_back(class_count[i] + extra[i]);
    }
    for (int i = 0; i + 1 < levels; ++i) {
        std::vector<int> step(target.sizes[i]);
        std::vector<char> seen(class_count[i], 0);
        for (int v = 0; v < source.sizes[i]; ++v) {
            const int c = class_of[i][v];
            if (seen[c]) continue;
            seen[c] = 1;
            step[c] = class_of[i + 1][source.steps[i][v]];
        }
        for (int e = class_count[i]; e < target.sizes[i]; ++e)
            step[e] = rng.below(target.sizes[i + 1]);
        target.steps.push_back(std::move(step));
    }
    target.validate();
    return SetSystemMap(source, std::move(target), std::move(class_of));
}

SetSystemMap random_set_map(Rng& rng, int levels, int max_size) {
    auto source = random_set_system(rng, levels, max_size);
    return random_set_map_from(rng, source, std::max(1, max_size - 1));
}

namespace {

FpMatrix random_matrix(Rng& rng, int rows, int cols, int p) {
    FpMatrix m(rows, cols, p);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.set(i, j, rng.below(p));
    return m;
}


std::vector<uint32_t> apply_matrix(const FpMatrix& m, const std::vector<uint32_t>& v) {
    std::vector<uint32_t> out(m.rows(), 0);
    for (int j = 0; j < m.cols(); ++j) {
        if (!v[j]) continue;
        for (int i = 0; i < m.rows(); ++i)
            out[i] = static_cast<uint32_t>((out[i] + uint64_t(m.at(i, j)) * v[j]) % m.prime());
    }
    return out;
}

// Quotient of F^dim by a step-compatible subspace chain: the map matrix and
// the data needed to push steps through.
struct LinearQuotient {
    FpMatrix projection;          // q x dim
    std::vector<int> rep_coords;  // standard basis vectors representing classes
};

LinearQuotient make_quotient(const std::vector<std::vector<uint32_t>>& subspace, int dim, int p) {
    ripshom::FpColumnSpace space(dim, p);
    for (const auto& u : subspace) space.insert(u, /*tracked=*/false);
    std::vector<int> reps;
    std::vector<int> rep_offer;
    for (int j = 0; j < dim; ++j) {
        std::vector<uint32_t> e(dim, 0);
        e[j] = 1;
        if (space.insert(e, /*tracked=*/true) >= 0) {
            reps.push_back(j);
            rep_offer.push_back(space.tracked_count() - 1);
        }
    }
    LinearQuotient q;
    q.rep_coords = reps;
    q.projection = FpMatrix(static_cast<int>(reps.size()), dim, p);
    for (int j = 0; j < dim; ++j) {
        std::vector<uint32_t> e(dim, 0);
        e[j] = 1;
        auto coords = space.coordinates(std::move(e));
        for (std::size_t t = 0; t < reps.size(); ++t)
            q.projection.set(static_cast<int>(t), j, coords[rep_offer[t]]);
    }
    return q;
}

}  // namespace

VecSystemMap random_vec_map_from(Rng& rng, const VecSystem& source, int max_extra) {
    const int levels = source.levels();
    const int p = source.p;

    // Step-compatible subspace chain: random generators per level, closed
    // forward under the source steps. The "eventually iso" branch draws
    // generators from the kernel of the transition to the terminal level,
    // so the chain dies there and a finite radius exists.
    const bool eventually_iso = rng.below(2) == 0;
    std::vector<std::vector<std::vector<uint32_t>>> subspace(levels);
    for (int i = 0; i < levels; ++i) {
        const int generators = rng.between(0, source.dims[i]);
        const FpMatrix to_last_kernel =
            eventually_iso ? source.transition(i, levels - 1).kernel_basis()
                           : FpMatrix(0, 0, p);
        for (int g = 0; g < generators; ++g) {
            std::vector<uint32_t> v(source.dims[i], 0);
            if (eventually_iso) {
                if (to_last_kernel.cols() == 0) break;
                for (int c = 0; c < to_last_kernel.cols(); ++c) {
                    const uint32_t coeff = static_cast<uint32_t>(rng.below(p));
                    for (int rr = 0; rr < source.dims[i]; ++rr)
                        v[rr] = static_cast<uint32_t>(
                            (v[rr] + uint64_t(coeff) * to_last_kernel.at(rr, c)) % p);
                }
            } else {
                for (auto& x : v) x = static_cast<uint32_t>(rng.below(p));
            }
            subspace[i].push_back(std::move(v));
        }
        if (i + 1 < levels)
            for (const auto& u : subspace[i])
                subspace[i + 1].push_back(apply_matrix(source.steps[i], u));
    }

    std::vector<LinearQuotient> quotients;
    for (int i = 0; i < levels; ++i)
        quotients.push_back(make_quotient(subspace[i], source.dims[i], p));

    VecSystem target;
    target.grid = source.grid;
    target.p = p;
    std::vector<int> q(levels), extra(levels);
    for (int i = 0; i < levels; ++i) {
        q[i] = quotients[i].projection.rows();
        extra[i] = (eventually_iso && i + 1 == levels) ? 0 : rng.between(0, max_extra);
        target.dims.push_back(q[i] + extra[i]);
    }
    std::vector<FpMatrix> f(levels);
    for (int i = 0; i < levels; ++i) {
        f[i] = FpMatrix(target.dims[i], source.dims[i], p);
        for (int r = 0; r < q[i]; ++r)
            for (int c = 0; c < source.dims[i]; ++c)
                f[i].set(r, c, quotients[i].projection.at(r, c));
    }
    for (int i = 0; i + 1 < levels; ++i) {
        FpMatrix step(target.dims[i + 1], target.dims[i], p);
        // quotient part: the induced map of the source step
        for (int t = 0; t < q[i]; ++t) {
            std::vector<uint32_t> e(source.dims[i], 0);
            e[quotients[i].rep_coords[t]] = 1;
            const auto image = apply_matrix(f[i + 1], apply_matrix(source.steps[i], e));
            for (int r = 0; r < target.dims[i + 1]; ++r) step.set(r, t, image[r]);
        }
        // remainder columns are free
        for (int c = q[i]; c < target.dims[i]; ++c)
            for (int r = 0; r < target.dims[i + 1]; ++r) step.set(r, c, rng.below(p));
        target.steps.push_back(std::move(step));
    }
    target.validate();
    return VecSystemMap(source, std::move(target), std::move(f));
}

VecSystemMap random_vec_map(Rng& rng, int levels, int max_dim, int p) {
    VecSystem source;
    source.grid = integer_grid(levels);
    source.p = p;
    for (int i = 0; i < levels; ++i) source.dims.push_back(rng.between(1, max_dim));
    for (int i = 0; i + 1 < levels; ++i)
        source.steps.push_back(random_matrix(rng, source.dims[i + 1], source.dims[i], p));
    source.validate();
    return random_vec_map_from(rng, source, std::max(1, max_dim - 1));
}

namespace {

std::vector<std::vector<uint32_t>> all_vectors(int dim) {
    std::vector<std::vector<uint32_t>> out;
    for (uint32_t mask = 0; mask < (1u << dim); ++mask) {
        std::vector<uint32_t> v(dim);
        for (int i = 0; i < dim; ++i) v[i] = (mask >> i) & 1;
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<uint32_t> apply(const FpMatrix& m, const std::vector<uint32_t>& v) {
    std::vector<uint32_t> out(m.rows(), 0);
    for (int i = 0; i < m.rows(); ++i) {
        uint32_t acc = 0;
        for (int j = 0; j < m.cols(); ++j) acc ^= m.at(i, j) & v[j];
        out[i] = acc & 1;
    }
    return out;
}

}  // namespace

bool brute_vec_mono(const VecSystemMap& f, double r) {
    for (int i = 0; i < f.source.levels(); ++i) {
        const int j = ripshom::shift_index(f.source.grid, i, r);
        const FpMatrix sigma = f.source.transition(i, j);
        for (const auto& v : all_vectors(f.source.dims[i])) {
            bool in_kernel = true;
            for (uint32_t x : apply(f.levels[i], v)) in_kernel = in_kernel && x == 0;
            if (!in_kernel) continue;
            for (uint32_t x : apply(sigma, v))
                if (x) return false;
        }
    }
    return true;
}

bool brute_vec_epi(const VecSystemMap& f, double r) {
    for (int i = 0; i < f.source.levels(); ++i) {
        const int j = ripshom::shift_index(f.source.grid, i, r);
        const FpMatrix sigma = f.target.transition(i, j);
        std::set<std::vector<uint32_t>> image;
        for (const auto& v : all_vectors(f.source.dims[j])) image.insert(apply(f.levels[j], v));
        for (const auto& b : all_vectors(f.target.dims[i]))
            if (!image.count(apply(sigma, b))) return false;
    }
    return true;
}

}  // namespace testsupport
