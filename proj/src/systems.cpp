#include "ripshom/systems.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace ripshom {

int level_index(const PhaseGrid& grid, double t, double tol) {
    int idx = 0;
    for (int i = 0; i < grid.size(); ++i)
        if (grid.values[i] <= t + tol) idx = i;
    return idx;
}

int shift_index(const PhaseGrid& grid, int s_index, double r, double tol) {
    if (r < 0) throw validation_error("shift_index: r must be non-negative");
    const double target = grid.values[s_index] + r;
    for (int i = 0; i < grid.size(); ++i)
        if (grid.values[i] >= target - tol) return i;
    return grid.size() - 1;  // terminal clamp
}

namespace {

PhaseGrid union_grid(const PhaseGrid& a, const PhaseGrid& b, double tol) {
    std::vector<double> vals = a.values;
    vals.insert(vals.end(), b.values.begin(), b.values.end());
    std::sort(vals.begin(), vals.end());
    PhaseGrid out;
    for (double v : vals)
        if (out.values.empty() || v - out.values.back() > tol) out.values.push_back(v);
    return out;
}

bool same_grid(const PhaseGrid& a, const PhaseGrid& b, double tol) {
    if (a.size() != b.size()) return false;
    for (int i = 0; i < a.size(); ++i)
        if (std::abs(a.values[i] - b.values[i]) > tol) return false;
    return true;
}

}  // namespace

void SetSystem::validate() const {
    if (grid.size() != levels() || sizes.empty())
        throw validation_error("SetSystem: grid and level count mismatch");
    if (static_cast<int>(steps.size()) != levels() - 1)
        throw validation_error("SetSystem: wrong number of steps");
    for (int i = 0; i + 1 < levels(); ++i) {
        if (static_cast<int>(steps[i].size()) != sizes[i])
            throw validation_error("SetSystem: step domain mismatch");
        for (int v : steps[i])
            if (v < 0 || v >= sizes[i + 1]) throw validation_error("SetSystem: step out of range");
    }
}

std::vector<int> SetSystem::transition(int from, int to) const {
    std::vector<int> t(sizes[from]);
    std::iota(t.begin(), t.end(), 0);
    for (int i = from; i < to; ++i)
        for (auto& v : t) v = steps[i][v];
    return t;
}

SetSystem SetSystem::refined(const PhaseGrid& finer, double tol) const {
    SetSystem out;
    out.grid = finer;
    std::vector<int> src_level(finer.size());
    for (int i = 0; i < finer.size(); ++i) src_level[i] = level_index(grid, finer.values[i], tol);
    for (int i = 0; i < finer.size(); ++i) out.sizes.push_back(sizes[src_level[i]]);
    for (int i = 0; i + 1 < finer.size(); ++i)
        out.steps.push_back(transition(src_level[i], src_level[i + 1]));
    return out;
}

void VecSystem::validate() const {
    if (!is_prime(p)) throw validation_error("VecSystem: modulus must be prime");
    if (grid.size() != levels() || dims.empty())
        throw validation_error("VecSystem: grid and level count mismatch");
    if (static_cast<int>(steps.size()) != levels() - 1)
        throw validation_error("VecSystem: wrong number of steps");
    for (int i = 0; i + 1 < levels(); ++i)
        if (steps[i].rows() != dims[i + 1] || steps[i].cols() != dims[i] || steps[i].prime() != p)
            throw validation_error("VecSystem: step shape mismatch");
}

FpMatrix VecSystem::transition(int from, int to) const {
    FpMatrix t = FpMatrix::identity(dims[from], p);
    for (int i = from; i < to; ++i) t = steps[i].multiply(t);
    return t;
}

VecSystem VecSystem::refined(const PhaseGrid& finer, double tol) const {
    VecSystem out;
    out.grid = finer;
    out.p = p;
    std::vector<int> src_level(finer.size());
    for (int i = 0; i < finer.size(); ++i) src_level[i] = level_index(grid, finer.values[i], tol);
    for (int i = 0; i < finer.size(); ++i) out.dims.push_back(dims[src_level[i]]);
    for (int i = 0; i + 1 < finer.size(); ++i)
        out.steps.push_back(transition(src_level[i], src_level[i + 1]));
    return out;
}

SetSystemMap::SetSystemMap(SetSystem source_, SetSystem target_,
                           std::vector<std::vector<int>> levels_, double tol)
    : source(std::move(source_)), target(std::move(target_)), levels(std::move(levels_)) {
    source.validate();
    target.validate();
    if (!same_grid(source.grid, target.grid, tol)) {
        const PhaseGrid common = union_grid(source.grid, target.grid, tol);
        // the supplied level maps must be indexed by the common grid
        source = source.refined(common, tol);
        target = target.refined(common, tol);
    }
    if (static_cast<int>(levels.size()) != source.levels())
        throw validation_error("SetSystemMap: wrong number of level maps");
    for (int i = 0; i < source.levels(); ++i) {
        if (static_cast<int>(levels[i].size()) != source.sizes[i])
            throw validation_error("SetSystemMap: level map domain mismatch");
        for (int v : levels[i])
            if (v < 0 || v >= target.sizes[i])
                throw validation_error("SetSystemMap: level map out of range");
    }
    for (int i = 0; i + 1 < source.levels(); ++i)
        for (int a = 0; a < source.sizes[i]; ++a)
            if (target.steps[i][levels[i][a]] != levels[i + 1][source.steps[i][a]])
                throw validation_error("SetSystemMap: naturality square fails");
}

VecSystemMap::VecSystemMap(VecSystem source_, VecSystem target_, std::vector<FpMatrix> levels_,
                           double tol)
    : source(std::move(source_)), target(std::move(target_)), levels(std::move(levels_)) {
    source.validate();
    target.validate();
    if (source.p != target.p) throw validation_error("VecSystemMap: modulus mismatch");
    if (!same_grid(source.grid, target.grid, tol)) {
        const PhaseGrid common = union_grid(source.grid, target.grid, tol);
        source = source.refined(common, tol);
        target = target.refined(common, tol);
    }
    if (static_cast<int>(levels.size()) != source.levels())
        throw validation_error("VecSystemMap: wrong number of level maps");
    for (int i = 0; i < source.levels(); ++i)
        if (levels[i].rows() != target.dims[i] || levels[i].cols() != source.dims[i])
            throw validation_error("VecSystemMap: level map shape mismatch");
    for (int i = 0; i + 1 < source.levels(); ++i)
        if (!(target.steps[i].multiply(levels[i]) == levels[i + 1].multiply(source.steps[i])))
            throw validation_error("VecSystemMap: naturality square fails");
}

RIsoVerdict r_iso_verdict(const SetSystemMap& f, double r, double tol) {
    RIsoVerdict verdict;
    verdict.mono = true;
    verdict.epi = true;
    const auto& grid = f.source.grid;
    for (int i = 0; i < f.source.levels(); ++i) {
        const int j = shift_index(grid, i, r, tol);
        const auto sigma_a = f.source.transition(i, j);
        const auto sigma_b = f.target.transition(i, j);
        // mono
        for (int a = 0; a < f.source.sizes[i] && verdict.mono; ++a)
            for (int b = a + 1; b < f.source.sizes[i] && verdict.mono; ++b)
                if (f.levels[i][a] == f.levels[i][b] && sigma_a[a] != sigma_a[b]) {
                    verdict.mono = false;
                    if (!verdict.failure)
                        verdict.failure = PredicateWitness{grid.values[i], "mono", {a, b}};
                }
        // epi
        std::vector<char> image(f.target.sizes[j], 0);
        for (int a = 0; a < f.source.sizes[j]; ++a) image[f.levels[j][a]] = 1;
        for (int b = 0; b < f.target.sizes[i] && verdict.epi; ++b)
            if (!image[sigma_b[b]]) {
                verdict.epi = false;
                if (!verdict.failure)
                    verdict.failure = PredicateWitness{grid.values[i], "epi", {b}};
            }
    }
    return verdict;
}

RIsoVerdict r_iso_verdict(const VecSystemMap& f, double r, double tol) {
    RIsoVerdict verdict;
    verdict.mono = true;
    verdict.epi = true;
    const auto& grid = f.source.grid;
    for (int i = 0; i < f.source.levels(); ++i) {
        const int j = shift_index(grid, i, r, tol);
        // mono: the shift kills the kernel
        const FpMatrix kernel = f.levels[i].kernel_basis();
        if (kernel.cols() > 0 && !f.source.transition(i, j).multiply(kernel).is_zero()) {
            verdict.mono = false;
            if (!verdict.failure) verdict.failure = PredicateWitness{grid.values[i], "mono", {}};
        }
        // epi: the shifted image lands inside the image of f
        const FpMatrix sigma_b = f.target.transition(i, j);
        const FpMatrix& fj = f.levels[j];
        if (fj.augment_columns(sigma_b).rank() != fj.rank()) {
            verdict.epi = false;
            if (!verdict.failure) verdict.failure = PredicateWitness{grid.values[i], "epi", {}};
        }
    }
    return verdict;
}

bool is_r_mono(const SetSystemMap& f, double r, double tol) { return r_iso_verdict(f, r, tol).mono; }
bool is_r_epi(const SetSystemMap& f, double r, double tol) { return r_iso_verdict(f, r, tol).epi; }
bool is_r_iso(const SetSystemMap& f, double r, double tol) { return r_iso_verdict(f, r, tol).iso(); }
bool is_r_mono(const VecSystemMap& f, double r, double tol) { return r_iso_verdict(f, r, tol).mono; }
bool is_r_epi(const VecSystemMap& f, double r, double tol) { return r_iso_verdict(f, r, tol).epi; }
bool is_r_iso(const VecSystemMap& f, double r, double tol) { return r_iso_verdict(f, r, tol).iso(); }

SetSystemMap compose(const SetSystemMap& f, const SetSystemMap& g) {
    SetSystemMap ff = f, gg = g;
    if (!same_grid(f.source.grid, g.source.grid, kDefaultTol)) {
        const PhaseGrid common = union_grid(f.source.grid, g.source.grid, kDefaultTol);
        std::vector<std::vector<int>> f_levels, g_levels;
        for (int i = 0; i < common.size(); ++i) {
            f_levels.push_back(f.levels[level_index(f.source.grid, common.values[i], kDefaultTol)]);
            g_levels.push_back(g.levels[level_index(g.source.grid, common.values[i], kDefaultTol)]);
        }
        ff = SetSystemMap(f.source.refined(common), f.target.refined(common), std::move(f_levels));
        gg = SetSystemMap(g.source.refined(common), g.target.refined(common), std::move(g_levels));
    }
    if (ff.target.sizes != gg.source.sizes || ff.target.steps != gg.source.steps)
        throw validation_error("compose: maps are not composable");
    std::vector<std::vector<int>> levels;
    for (int i = 0; i < ff.source.levels(); ++i) {
        std::vector<int> level(ff.source.sizes[i]);
        for (int a = 0; a < ff.source.sizes[i]; ++a) level[a] = gg.levels[i][ff.levels[i][a]];
        levels.push_back(std::move(level));
    }
    return SetSystemMap(ff.source, gg.target, std::move(levels));
}

VecSystemMap compose(const VecSystemMap& f, const VecSystemMap& g) {
    if (!same_grid(f.source.grid, g.source.grid, kDefaultTol))
        throw validation_error("compose: vector system grids differ");
    if (f.target.dims != g.source.dims)
        throw validation_error("compose: maps are not composable");
    std::vector<FpMatrix> levels;
    for (int i = 0; i < f.source.levels(); ++i)
        levels.push_back(g.levels[i].multiply(f.levels[i]));
    return VecSystemMap(f.source, g.target, std::move(levels));
}

template <typename MapT>
static bool composition_bound_impl(const MapT& f, const MapT& g, double r, double s,
                                   TriangleCase which, double tol) {
    const MapT gf = compose(f, g);
    switch (which) {
        case TriangleCase::ComposeBound:
            if (!is_r_iso(f, r, tol) || !is_r_iso(g, s, tol)) return true;
            return is_r_iso(gf, r + s, tol);
        case TriangleCase::LeftFactor:
            if (!is_r_iso(gf, r, tol) || !is_r_iso(g, s, tol)) return true;
            return is_r_iso(f, r + s, tol);
        case TriangleCase::RightFactor:
            if (!is_r_iso(gf, r, tol) || !is_r_iso(f, s, tol)) return true;
            return is_r_iso(g, r + s, tol);
    }
    return true;
}

bool composition_bound_holds(const SetSystemMap& f, const SetSystemMap& g, double r, double s,
                             TriangleCase which, double tol) {
    return composition_bound_impl(f, g, r, s, which, tol);
}

bool composition_bound_holds(const VecSystemMap& f, const VecSystemMap& g, double r, double s,
                             TriangleCase which, double tol) {
    return composition_bound_impl(f, g, r, s, which, tol);
}

SetSystemPushout pushout_set_systems(const SetSystemMap& f, const SetSystemMap& g) {
    if (!same_grid(f.source.grid, g.source.grid, kDefaultTol))
        throw validation_error("pushout_set_systems: source grids differ");
    if (f.source.sizes != g.source.sizes || f.source.steps != g.source.steps)
        throw validation_error("pushout_set_systems: sources differ");

    const int n = f.source.levels();
    SetSystem d;
    d.grid = f.source.grid;
    std::vector<std::vector<int>> class_of_b(n), class_of_c(n);

    for (int i = 0; i < n; ++i) {
        const int nb = f.target.sizes[i], nc = g.target.sizes[i];
        // union-find over B ⊔ C with relations f(a) ~ g(a)
        std::vector<int> parent(nb + nc);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&parent](int v) {
            while (parent[v] != v) {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            return v;
        };
        for (int a = 0; a < f.source.sizes[i]; ++a) {
            int x = find(f.levels[i][a]);
            int y = find(nb + g.levels[i][a]);
            if (x != y) parent[std::max(x, y)] = std::min(x, y);
        }
        std::map<int, int> class_ids;  // root -> class id, in root order
        for (int v = 0; v < nb + nc; ++v) {
            const int root = find(v);
            if (!class_ids.count(root)) {
                const int id = static_cast<int>(class_ids.size());
                class_ids[root] = id;
            }
        }
        // class ids above follow first-seen order, which is ascending roots
        class_of_b[i].resize(nb);
        class_of_c[i].resize(nc);
        for (int b = 0; b < nb; ++b) class_of_b[i][b] = class_ids[find(b)];
        for (int c = 0; c < nc; ++c) class_of_c[i][c] = class_ids[find(nb + c)];
        d.sizes.push_back(static_cast<int>(class_ids.size()));
    }
    for (int i = 0; i + 1 < n; ++i) {
        std::vector<int> step(d.sizes[i], -1);
        const int nb = f.target.sizes[i];
        for (int b = 0; b < nb; ++b) step[class_of_b[i][b]] = class_of_b[i + 1][f.target.steps[i][b]];
        for (int c = 0; c < g.target.sizes[i]; ++c) {
            const int from = class_of_c[i][c];
            const int to = class_of_c[i + 1][g.target.steps[i][c]];
            if (step[from] >= 0 && step[from] != to)
                throw inconsistency_error("pushout_set_systems: induced step is ill-defined");
            step[from] = to;
        }
        d.steps.push_back(std::move(step));
    }
    d.validate();
    SetSystemMap from_b(f.target, d, class_of_b);
    SetSystemMap from_c(g.target, d, class_of_c);
    return {std::move(d), std::move(from_b), std::move(from_c)};
}

namespace {

std::vector<double> radius_candidates(const PhaseGrid& grid) {
    std::vector<double> out{0.0};
    for (int i = 0; i < grid.size(); ++i)
        for (int j = i + 1; j < grid.size(); ++j) out.push_back(grid.values[j] - grid.values[i]);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) { return std::abs(a - b) <= kDefaultTol; }),
              out.end());
    return out;
}

template <typename MapT>
std::optional<double> minimal_radius_impl(const MapT& f, double tol) {
    const auto candidates = radius_candidates(f.source.grid);
    // r-iso is monotone in r, so binary search over the candidate values
    auto it = std::partition_point(candidates.begin(), candidates.end(),
                                   [&](double r) { return !is_r_iso(f, r, tol); });
    if (it == candidates.end()) return std::nullopt;
    return *it;
}

}  // namespace

std::optional<double> minimal_iso_radius(const SetSystemMap& f, double tol) {
    return minimal_radius_impl(f, tol);
}

std::optional<double> minimal_iso_radius(const VecSystemMap& f, double tol) {
    return minimal_radius_impl(f, tol);
}

std::optional<double> controlled_equivalence_radius(const InvariantBundle& bundle, double tol) {
    if (bundle.set_maps.empty() && bundle.vec_maps.empty())
        throw validation_error("controlled_equivalence_radius: empty bundle");
    std::vector<double> candidates;
    {
        PhaseGrid merged;
        for (const auto& m : bundle.set_maps) merged = union_grid(merged, m.source.grid, tol);
        for (const auto& m : bundle.vec_maps) merged = union_grid(merged, m.source.grid, tol);
        candidates = radius_candidates(merged);
    }
    auto all_iso = [&](double r) {
        for (const auto& m : bundle.set_maps)
            if (!is_r_iso(m, r, tol)) return false;
        for (const auto& m : bundle.vec_maps)
            if (!is_r_iso(m, r, tol)) return false;
        return true;
    };
    auto it = std::partition_point(candidates.begin(), candidates.end(),
                                   [&](double r) { return !all_iso(r); });
    if (it == candidates.end()) return std::nullopt;
    return *it;
}

// ---- filtered complexes and their systems ----

FilteredComplex FilteredComplex::from_rips(const BifilteredComplex& complex) {
    FilteredComplex out;
    out.vertex_count = complex.points().size();
    for (const auto& e : complex.entries()) out.simplices.emplace_back(e.simplex, e.rips_birth);
    return out;
}

FilteredComplex FilteredComplex::from_degree_rips(const BifilteredComplex& complex, int k) {
    if (k > complex.deg_cap())
        throw validation_error("FilteredComplex::from_degree_rips: k exceeds deg_cap");
    FilteredComplex out;
    out.vertex_count = complex.points().size();
    for (const auto& e : complex.entries()) {
        const auto birth = k == 0 ? std::optional<double>(e.rips_birth) : e.degree_births[k];
        if (birth) out.simplices.emplace_back(e.simplex, *birth);
    }
    return out;
}

void FilteredComplex::validate(double tol) const {
    std::map<std::vector<int>, double> births;
    for (std::size_t i = 0; i < simplices.size(); ++i) {
        const auto& [s, birth] = simplices[i];
        if (s.v.empty()) throw validation_error("FilteredComplex: empty simplex");
        for (std::size_t t = 0; t < s.v.size(); ++t) {
            if (s.v[t] < 0 || s.v[t] >= vertex_count)
                throw validation_error("FilteredComplex: vertex out of range");
            if (t > 0 && s.v[t] <= s.v[t - 1])
                throw validation_error("FilteredComplex: unsorted simplex");
        }
        if (i > 0 && !simplex_less(simplices[i - 1].first, s))
            throw validation_error("FilteredComplex: simplices out of order");
        births[s.v] = birth;
    }
    for (const auto& [s, birth] : simplices) {
        if (s.v.size() == 1) continue;
        for (std::size_t drop = 0; drop < s.v.size(); ++drop) {
            std::vector<int> facet;
            for (std::size_t t = 0; t < s.v.size(); ++t)
                if (t != drop) facet.push_back(s.v[t]);
            auto it = births.find(facet);
            if (it == births.end()) throw validation_error("FilteredComplex: missing facet");
            if (it->second > birth + tol)
                throw validation_error("FilteredComplex: facet born after its coface");
        }
    }
}

ComplexSlice FilteredComplex::slice_at(double t, double tol) const {
    std::vector<Simplex> present;
    for (const auto& [s, birth] : simplices)
        if (birth <= t + tol) present.push_back(s);
    return ComplexSlice::from_simplices(vertex_count, std::move(present), false);
}

std::vector<double> FilteredComplex::birth_values() const {
    std::vector<double> out;
    for (const auto& [s, birth] : simplices) out.push_back(birth);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) { return std::abs(a - b) <= kDefaultTol; }),
              out.end());
    return out;
}

PhaseGrid merged_grid(const std::vector<const FilteredComplex*>& complexes, double tol) {
    std::vector<double> vals{0.0};
    for (const auto* c : complexes) {
        const auto births = c->birth_values();
        vals.insert(vals.end(), births.begin(), births.end());
    }
    std::sort(vals.begin(), vals.end());
    PhaseGrid out;
    for (double v : vals)
        if (out.values.empty() || v - out.values.back() > tol) out.values.push_back(v);
    return out;
}

namespace {

struct Pi0Levels {
    std::vector<std::vector<std::vector<int>>> classes;  // per level
    std::vector<std::vector<int>> class_of_vertex;       // per level, -1 when absent
};

Pi0Levels pi0_levels(const FilteredComplex& complex, const PhaseGrid& grid, double tol) {
    Pi0Levels out;
    for (int i = 0; i < grid.size(); ++i) {
        const auto slice = complex.slice_at(grid.values[i], tol);
        auto classes = pi0(slice);
        std::vector<int> class_of(complex.vertex_count, -1);
        for (std::size_t c = 0; c < classes.size(); ++c)
            for (int v : classes[c]) class_of[v] = static_cast<int>(c);
        out.classes.push_back(std::move(classes));
        out.class_of_vertex.push_back(std::move(class_of));
    }
    return out;
}

}  // namespace

std::vector<std::vector<int>> betti_curves(const FilteredComplex& complex, const PhaseGrid& grid,
                                           int p, int max_k, double tol) {
    const int top = max_k + 1;
    // birth-ordered simplices and fixed whole-complex basis indices per dim
    std::vector<std::vector<std::pair<double, const Simplex*>>> by_dim(top + 1);
    std::vector<std::map<std::vector<int>, int>> index(top + 1);
    for (const auto& [s, birth] : complex.simplices) {
        const int d = s.dim();
        if (d > top) continue;
        by_dim[d].emplace_back(birth, &s);
    }
    for (int d = 0; d <= top; ++d) {
        std::stable_sort(by_dim[d].begin(), by_dim[d].end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        int next = 0;
        for (const auto& [s, birth] : complex.simplices)
            if (s.dim() == d) index[d][s.v] = next++;
    }

    std::vector<FpColumnSpace> spaces;
    for (int d = 0; d <= top; ++d)
        spaces.emplace_back(d == 0 ? 0 : static_cast<int>(index[d - 1].size()), p);

    std::vector<std::size_t> cursor(top + 1, 0);
    std::vector<int> born(top + 1, 0), rank(top + 1, 0);
    std::vector<std::vector<int>> out;
    for (int i = 0; i < grid.size(); ++i) {
        const double s = grid.values[i];
        for (int d = 0; d <= top; ++d) {
            auto& list = by_dim[d];
            while (cursor[d] < list.size() && list[cursor[d]].first <= s + tol) {
                const Simplex& simplex = *list[cursor[d]].second;
                ++born[d];
                if (d > 0) {
                    std::vector<uint32_t> col(index[d - 1].size(), 0);
                    for (std::size_t drop = 0; drop < simplex.v.size(); ++drop) {
                        std::vector<int> facet;
                        for (std::size_t t = 0; t < simplex.v.size(); ++t)
                            if (t != drop) facet.push_back(simplex.v[t]);
                        const long long sign = (drop % 2 == 0) ? 1 : p - 1;
                        col[index[d - 1].at(facet)] = static_cast<uint32_t>(sign % p);
                    }
                    if (spaces[d].insert(std::move(col), /*tracked=*/false) >= 0) ++rank[d];
                }
                ++cursor[d];
            }
        }
        std::vector<int> betti(max_k + 1);
        for (int k = 0; k <= max_k; ++k) betti[k] = born[k] - rank[k] - rank[k + 1];
        out.push_back(std::move(betti));
    }
    return out;
}

std::vector<int> component_curve(const FilteredComplex& complex, const PhaseGrid& grid,
                                 double tol) {
    // birth-ordered vertices and edges
    std::vector<std::pair<double, int>> vertices;
    std::vector<std::pair<double, std::pair<int, int>>> edges;
    for (const auto& [s, birth] : complex.simplices) {
        if (s.v.size() == 1) vertices.emplace_back(birth, s.v[0]);
        if (s.v.size() == 2) edges.emplace_back(birth, std::make_pair(s.v[0], s.v[1]));
    }
    std::stable_sort(vertices.begin(), vertices.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::stable_sort(edges.begin(), edges.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<int> parent(complex.vertex_count);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&parent](int v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };

    std::vector<int> out;
    std::size_t vc = 0, ec = 0;
    int classes = 0;
    for (int i = 0; i < grid.size(); ++i) {
        const double s = grid.values[i];
        while (vc < vertices.size() && vertices[vc].first <= s + tol) {
            ++classes;
            ++vc;
        }
        while (ec < edges.size() && edges[ec].first <= s + tol) {
            const int a = find(edges[ec].second.first), b = find(edges[ec].second.second);
            if (a != b) {
                parent[std::max(a, b)] = std::min(a, b);
                --classes;
            }
            ++ec;
        }
        out.push_back(classes);
    }
    return out;
}

SetSystem pi0_system(const FilteredComplex& complex, const PhaseGrid& grid, double tol) {
    const auto levels = pi0_levels(complex, grid, tol);
    SetSystem out;
    out.grid = grid;
    for (const auto& classes : levels.classes) out.sizes.push_back(static_cast<int>(classes.size()));
    for (int i = 0; i + 1 < grid.size(); ++i) {
        std::vector<int> step(out.sizes[i]);
        for (int c = 0; c < out.sizes[i]; ++c) {
            const int v = levels.classes[i][c].front();
            const int to = levels.class_of_vertex[i + 1][v];
            if (to < 0) throw inconsistency_error("pi0_system: vertex disappeared along the grid");
            step[c] = to;
        }
        out.steps.push_back(std::move(step));
    }
    out.validate();
    return out;
}

SetSystemMap pi0_system_map(const FilteredComplex& src, const FilteredComplex& dst,
                            const std::vector<int>& vertex_map, const PhaseGrid& grid,
                            double tol) {
    const auto src_levels = pi0_levels(src, grid, tol);
    const auto dst_levels = pi0_levels(dst, grid, tol);
    std::vector<std::vector<int>> levels;
    for (int i = 0; i < grid.size(); ++i) {
        std::vector<int> level(src_levels.classes[i].size());
        for (std::size_t c = 0; c < src_levels.classes[i].size(); ++c) {
            int image = -1;
            for (int v : src_levels.classes[i][c]) {
                const int w = dst_levels.class_of_vertex[i][vertex_map[v]];
                if (w < 0)
                    throw inconsistency_error("pi0_system_map: image vertex absent from target");
                if (image < 0) image = w;
                if (image != w)
                    throw inconsistency_error("pi0_system_map: class image is ill-defined");
            }
            level[c] = image;
        }
        levels.push_back(std::move(level));
    }
    return SetSystemMap(pi0_system(src, grid, tol), pi0_system(dst, grid, tol), std::move(levels),
                        tol);
}

namespace {

struct HomologyLevels {
    std::vector<ComplexSlice> slices;
    std::vector<HomologyBasis> bases;
};

HomologyLevels homology_levels(const FilteredComplex& complex, const PhaseGrid& grid, int p,
                               int max_k, double tol) {
    HomologyLevels out;
    for (int i = 0; i < grid.size(); ++i) {
        out.slices.push_back(complex.slice_at(grid.values[i], tol));
        out.bases.emplace_back(out.slices.back(), p, max_k);
    }
    return out;
}

VecSystem vec_system_from_levels(const HomologyLevels& levels, const PhaseGrid& grid, int p,
                                 int degree, int vertex_count) {
    VecSystem out;
    out.grid = grid;
    out.p = p;
    std::vector<int> identity(vertex_count);
    std::iota(identity.begin(), identity.end(), 0);
    for (const auto& b : levels.bases) out.dims.push_back(b.betti(degree));
    for (int i = 0; i + 1 < grid.size(); ++i)
        out.steps.push_back(
            vertex_map_homology(levels.bases[i], levels.bases[i + 1], identity, degree));
    out.validate();
    return out;
}

}  // namespace

VecSystem homology_system(const FilteredComplex& complex, const PhaseGrid& grid, int p, int degree,
                          double tol) {
    const auto levels = homology_levels(complex, grid, p, degree, tol);
    return vec_system_from_levels(levels, grid, p, degree, complex.vertex_count);
}

VecSystemMap homology_system_map(const FilteredComplex& src, const FilteredComplex& dst,
                                 const std::vector<int>& vertex_map, const PhaseGrid& grid, int p,
                                 int degree, double tol) {
    const auto src_levels = homology_levels(src, grid, p, degree, tol);
    const auto dst_levels = homology_levels(dst, grid, p, degree, tol);
    std::vector<FpMatrix> levels;
    for (int i = 0; i < grid.size(); ++i)
        levels.push_back(
            vertex_map_homology(src_levels.bases[i], dst_levels.bases[i], vertex_map, degree));
    return VecSystemMap(vec_system_from_levels(src_levels, grid, p, degree, src.vertex_count),
                        vec_system_from_levels(dst_levels, grid, p, degree, dst.vertex_count),
                        std::move(levels), tol);
}

GluedComplexes glue_filtered_complexes(const FilteredComplex& a, const FilteredComplex& b,
                                       const std::vector<int>& a_to_b, const FilteredComplex& c,
                                       const std::vector<int>& a_to_c, double tol) {
    a.validate(tol);
    b.validate(tol);
    c.validate(tol);
    auto check_injection = [&](const std::vector<int>& map, int target_count, const char* name) {
        if (static_cast<int>(map.size()) != a.vertex_count)
            throw validation_error(std::string("glue: ") + name + " has wrong domain");
        std::vector<char> used(target_count, 0);
        for (int v : map) {
            if (v < 0 || v >= target_count)
                throw validation_error(std::string("glue: ") + name + " out of range");
            if (used[v]) throw validation_error(std::string("glue: ") + name + " is not injective");
            used[v] = 1;
        }
    };
    check_injection(a_to_b, b.vertex_count, "a_to_b");
    check_injection(a_to_c, c.vertex_count, "a_to_c");

    auto birth_lookup = [](const FilteredComplex& fc) {
        std::map<std::vector<int>, double> out;
        for (const auto& [s, birth] : fc.simplices) out[s.v] = birth;
        return out;
    };
    const auto b_births = birth_lookup(b);
    const auto c_births = birth_lookup(c);
    auto mapped = [](const Simplex& s, const std::vector<int>& map) {
        std::vector<int> out;
        out.reserve(s.v.size());
        for (int v : s.v) out.push_back(map[v]);
        std::sort(out.begin(), out.end());
        return out;
    };
    for (const auto& [s, birth] : a.simplices) {
        auto itb = b_births.find(mapped(s, a_to_b));
        if (itb == b_births.end() || std::abs(itb->second - birth) > tol)
            throw validation_error("glue: births disagree between A and B");
        auto itc = c_births.find(mapped(s, a_to_c));
        if (itc == c_births.end() || std::abs(itc->second - birth) > tol)
            throw validation_error("glue: births disagree between A and C");
    }

    GluedComplexes out;
    out.a = a;
    out.b = b;
    out.c = c;
    out.a_to_b = a_to_b;
    out.a_to_c = a_to_c;

    // D vertices: all of B, then C's vertices outside the image of A
    std::vector<int> c_to_d(c.vertex_count, -1);
    for (int va = 0; va < a.vertex_count; ++va) c_to_d[a_to_c[va]] = a_to_b[va];
    int next = b.vertex_count;
    for (int vc = 0; vc < c.vertex_count; ++vc)
        if (c_to_d[vc] < 0) c_to_d[vc] = next++;
    out.c_to_d = c_to_d;
    out.b_to_d.resize(b.vertex_count);
    std::iota(out.b_to_d.begin(), out.b_to_d.end(), 0);

    std::map<std::vector<int>, double> d_births;
    for (const auto& [s, birth] : b.simplices) d_births[s.v] = birth;
    for (const auto& [s, birth] : c.simplices) {
        auto [it, inserted] = d_births.try_emplace(mapped(s, c_to_d), birth);
        if (!inserted) it->second = std::min(it->second, birth);
    }
    out.d.vertex_count = next;
    for (auto& [v, birth] : d_births) out.d.simplices.emplace_back(Simplex{v}, birth);
    std::sort(out.d.simplices.begin(), out.d.simplices.end(),
              [](const auto& x, const auto& y) { return simplex_less(x.first, y.first); });
    out.d.validate(tol);
    return out;
}

GluedSystems glue_complex_systems(const FilteredComplex& a, const FilteredComplex& b,
                                  const std::vector<int>& a_to_b, const FilteredComplex& c,
                                  const std::vector<int>& a_to_c, const std::vector<int>& primes,
                                  int max_k, double tol) {
    auto complexes = glue_filtered_complexes(a, b, a_to_b, c, a_to_c, tol);
    const PhaseGrid grid =
        merged_grid({&complexes.a, &complexes.b, &complexes.c, &complexes.d}, tol);

    SetSystemMap pi0_ab = pi0_system_map(complexes.a, complexes.b, complexes.a_to_b, grid, tol);
    SetSystemMap pi0_cd = pi0_system_map(complexes.c, complexes.d, complexes.c_to_d, grid, tol);
    std::vector<GluedSystems::HomologyPair> homology;
    for (int p : primes)
        for (int k = 0; k <= max_k; ++k)
            homology.push_back(
                {p, k,
                 homology_system_map(complexes.a, complexes.b, complexes.a_to_b, grid, p, k, tol),
                 homology_system_map(complexes.c, complexes.d, complexes.c_to_d, grid, p, k, tol)});
    return GluedSystems{std::move(complexes), grid, std::move(pi0_ab), std::move(pi0_cd),
                        std::move(homology)};
}

InvariantBundle pair_invariant_bundle(const SubsetPair& pair, int dim_cap,
                                      const std::vector<int>& primes, int max_k, double tol,
                                      const Budget& budget) {
    const auto member_fc = FilteredComplex::from_rips(build_rips(pair.member_space(), dim_cap, budget));
    const auto ambient_fc = FilteredComplex::from_rips(build_rips(pair.ambient, dim_cap, budget));
    const PhaseGrid grid = merged_grid({&member_fc, &ambient_fc}, tol);

    InvariantBundle bundle;
    bundle.set_maps.push_back(pi0_system_map(member_fc, ambient_fc, pair.members, grid, tol));
    for (int p : primes)
        for (int k = 0; k <= max_k; ++k)
            bundle.vec_maps.push_back(
                homology_system_map(member_fc, ambient_fc, pair.members, grid, p, k, tol));
    return bundle;
}

}  // namespace ripshom
