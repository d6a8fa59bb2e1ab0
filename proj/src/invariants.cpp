#include "ripshom/invariants.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace ripshom {

namespace {

// Union-find with path halving; canonical representative is the least
// member, fixed up after all unions.
struct UnionFind {
    std::vector<int> parent;

    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

    int find(int v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    }

    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent[b] = a;  // least index wins
    }
};

}  // namespace

ComplexSlice ComplexSlice::from_simplices(int vertex_count, std::vector<Simplex> simplices,
                                          bool validate) {
    ComplexSlice slice;
    slice.vertex_count = vertex_count;
    slice.simplices = std::move(simplices);
    std::sort(slice.simplices.begin(), slice.simplices.end(), simplex_less);
    slice.simplices.erase(std::unique(slice.simplices.begin(), slice.simplices.end()),
                          slice.simplices.end());
    if (validate) {
        for (const auto& s : slice.simplices) {
            if (s.v.empty()) throw validation_error("ComplexSlice: empty simplex");
            for (std::size_t i = 0; i < s.v.size(); ++i) {
                if (s.v[i] < 0 || s.v[i] >= vertex_count)
                    throw validation_error("ComplexSlice: vertex out of range");
                if (i > 0 && s.v[i] <= s.v[i - 1])
                    throw validation_error("ComplexSlice: vertices must be strictly increasing");
            }
            if (s.v.size() > 1) {
                // all facets present (downward closure)
                for (std::size_t drop = 0; drop < s.v.size(); ++drop) {
                    Simplex facet;
                    for (std::size_t i = 0; i < s.v.size(); ++i)
                        if (i != drop) facet.v.push_back(s.v[i]);
                    if (!slice.contains(facet))
                        throw validation_error("ComplexSlice: not downward closed");
                }
            }
        }
    }
    return slice;
}

std::vector<int> ComplexSlice::vertices() const {
    std::vector<int> out;
    for (const auto& s : simplices)
        if (s.v.size() == 1) out.push_back(s.v[0]);
    return out;
}

bool ComplexSlice::contains(const Simplex& s) const {
    return std::binary_search(simplices.begin(), simplices.end(), s,
                              [](const Simplex& a, const Simplex& b) { return simplex_less(a, b); });
}

int ComplexSlice::max_dim() const {
    return simplices.empty() ? -1 : simplices.back().dim();
}

std::vector<std::vector<int>> pi0(const ComplexSlice& slice) {
    UnionFind uf(slice.vertex_count);
    std::vector<char> present(slice.vertex_count, 0);
    for (const auto& s : slice.simplices) {
        if (s.v.size() == 1) present[s.v[0]] = 1;
        if (s.v.size() == 2) uf.unite(s.v[0], s.v[1]);
    }
    std::map<int, std::vector<int>> classes;
    for (int v = 0; v < slice.vertex_count; ++v)
        if (present[v]) classes[uf.find(v)].push_back(v);
    std::vector<std::vector<int>> out;
    out.reserve(classes.size());
    for (auto& [root, members] : classes) out.push_back(std::move(members));
    return out;
}

FieldChainComplex::FieldChainComplex(const ComplexSlice& slice, int p, int max_dim) : p_(p) {
    if (!is_prime(p)) throw validation_error("FieldChainComplex: p must be prime");
    const int top = std::min(max_dim, std::max(slice.max_dim(), 0));
    bases_.resize(top + 1);
    for (const auto& s : slice.simplices)
        if (s.dim() <= top) bases_[s.dim()].push_back(s);
    // slice order restricted to one dimension is lexicographic already

    boundaries_.reserve(top + 1);
    for (int d = 0; d <= top; ++d) {
        const int rows = d == 0 ? 0 : static_cast<int>(bases_[d - 1].size());
        FpMatrix bd(rows, static_cast<int>(bases_[d].size()), p);
        if (d > 0) {
            for (int j = 0; j < static_cast<int>(bases_[d].size()); ++j) {
                const auto& s = bases_[d][j];
                for (std::size_t drop = 0; drop < s.v.size(); ++drop) {
                    Simplex facet;
                    for (std::size_t i = 0; i < s.v.size(); ++i)
                        if (i != drop) facet.v.push_back(s.v[i]);
                    const int i = basis_index(d - 1, facet);
                    if (i < 0) throw inconsistency_error("FieldChainComplex: missing facet");
                    bd.set(i, j, (drop % 2 == 0) ? 1 : -1);
                }
            }
        }
        boundaries_.push_back(std::move(bd));
    }
    for (int d = 1; d + 1 <= top; ++d)
        if (!boundaries_[d].multiply(boundaries_[d + 1]).is_zero())
            throw inconsistency_error("FieldChainComplex: boundary squared is nonzero");
}

int FieldChainComplex::basis_index(int dim, const Simplex& s) const {
    if (dim < 0 || dim > max_dim()) return -1;
    const auto& base = bases_[dim];
    auto it = std::lower_bound(base.begin(), base.end(), s, [](const Simplex& a, const Simplex& b) {
        return simplex_less(a, b);
    });
    if (it == base.end() || !(*it == s)) return -1;
    return static_cast<int>(it - base.begin());
}

HomologyBasis::HomologyBasis(const ComplexSlice& slice, int p, int max_k)
    : chains_(slice, p, max_k + 1) {
    reps_.resize(max_k + 1);
    rep_offer_index_.resize(max_k + 1);
    for (int k = 0; k <= max_k; ++k) {
        const int nk = k <= chains_.max_dim() ? chains_.boundary(k).cols() : 0;

        // Boundary columns are untracked span; representative cycles are the
        // tracked columns, so homology coordinates fall out of the same
        // space directly.
        FpColumnSpace space(nk, p);
        if (k + 1 <= chains_.max_dim()) {
            const FpMatrix& next = chains_.boundary(k + 1);
            std::vector<uint32_t> col(nk);
            for (int j = 0; j < next.cols(); ++j) {
                for (int i = 0; i < nk; ++i) col[i] = next.at(i, j);
                space.insert(col, /*tracked=*/false);
            }
        }
        if (nk > 0) {
            const FpMatrix kb = chains_.boundary(k).kernel_basis();
            std::vector<uint32_t> col(nk);
            for (int j = 0; j < kb.cols(); ++j) {
                for (int i = 0; i < nk; ++i) col[i] = kb.at(i, j);
                if (space.insert(col, /*tracked=*/true) >= 0) {
                    reps_[k].push_back(col);
                    rep_offer_index_[k].push_back(space.tracked_count() - 1);
                }
            }
        }
        spaces_.push_back(std::move(space));
    }
}

std::vector<uint32_t> HomologyBasis::coordinates(int k, std::vector<uint32_t> cycle) const {
    std::vector<uint32_t> out(betti(k), 0);
    const bool zero = std::all_of(cycle.begin(), cycle.end(), [](uint32_t v) { return v == 0; });
    auto coords = spaces_[k].coordinates(std::move(cycle));
    if (coords.empty()) {
        if (zero) return out;
        throw inconsistency_error("HomologyBasis::coordinates: vector outside cycle space");
    }
    // rejected tracked offers never carry weight in a reduced expression,
    // so only the accepted representatives' slots are read
    for (int i = 0; i < betti(k); ++i) out[i] = coords[rep_offer_index_[k][i]];
    return out;
}

std::vector<int> homology_ranks(const ComplexSlice& slice, int p, int max_k) {
    HomologyBasis h(slice, p, max_k);
    std::vector<int> out(max_k + 1);
    for (int k = 0; k <= max_k; ++k) out[k] = h.betti(k);
    return out;
}

namespace {

// Chain-level image of a basis simplex under a vertex map: the sorted image
// simplex and the orientation sign, or nullopt when vertices collide.
std::optional<std::pair<Simplex, int>> map_simplex(const Simplex& s,
                                                   const std::vector<int>& vertex_map) {
    std::vector<int> image;
    image.reserve(s.v.size());
    for (int v : s.v) image.push_back(vertex_map[v]);
    // parity of the sort permutation via insertion sort inversion count
    int inversions = 0;
    for (std::size_t i = 1; i < image.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (image[j] > image[i]) ++inversions;
    std::sort(image.begin(), image.end());
    if (std::adjacent_find(image.begin(), image.end()) != image.end()) return std::nullopt;
    return std::make_pair(Simplex{std::move(image)}, inversions % 2 == 0 ? 1 : -1);
}

}  // namespace

FpMatrix vertex_map_homology(const HomologyBasis& src, const HomologyBasis& dst,
                             const std::vector<int>& vertex_map, int k) {
    const int p = src.chains().prime();
    if (p != dst.chains().prime())
        throw validation_error("vertex_map_homology: mismatched primes");
    FpMatrix out(dst.betti(k), src.betti(k), p);
    const int dst_nk = k <= dst.chains().max_dim()
                           ? static_cast<int>(dst.chains().basis(k).size())
                           : 0;
    for (int j = 0; j < src.betti(k); ++j) {
        const auto& rep = src.representative(k, j);
        std::vector<uint32_t> image(dst_nk, 0);
        const auto& basis = src.chains().basis(k);
        for (std::size_t t = 0; t < basis.size(); ++t) {
            if (!rep[t]) continue;
            auto mapped = map_simplex(basis[t], vertex_map);
            if (!mapped) continue;
            const int idx = dst.chains().basis_index(k, mapped->first);
            if (idx < 0)
                throw validation_error("vertex_map_homology: image simplex missing from target");
            long long add = static_cast<long long>(rep[t]) * mapped->second;
            long long cur = image[idx];
            long long v = (cur + add) % p;
            if (v < 0) v += p;
            image[idx] = static_cast<uint32_t>(v);
        }
        auto coords = dst.coordinates(k, std::move(image));
        for (int i = 0; i < dst.betti(k); ++i) out.set(i, j, coords[i]);
    }
    return out;
}

FpMatrix vertex_map_homology(const ComplexSlice& src, const ComplexSlice& dst,
                             const std::vector<int>& vertex_map, int p, int k) {
    HomologyBasis hs(src, p, k), hd(dst, p, k);
    return vertex_map_homology(hs, hd, vertex_map, k);
}

FpMatrix induced_homology_map(const ComplexSlice& sub, const ComplexSlice& super, int p, int k) {
    for (const auto& s : sub.simplices)
        if (!super.contains(s))
            throw validation_error("induced_homology_map: sub is not included in super");
    std::vector<int> id(sub.vertex_count);
    std::iota(id.begin(), id.end(), 0);
    return vertex_map_homology(sub, super, id, p, k);
}

GroupoidPresentation groupoid_presentation(const ComplexSlice& slice, int basepoint) {
    GroupoidPresentation pres;
    pres.objects = slice.vertices();
    if (!std::binary_search(pres.objects.begin(), pres.objects.end(), basepoint))
        throw validation_error("groupoid_presentation: basepoint is not a vertex of the slice");
    pres.basepoint = basepoint;

    std::map<std::pair<int, int>, int> edge_index;
    for (const auto& s : slice.simplices)
        if (s.v.size() == 2) {
            edge_index[{s.v[0], s.v[1]}] = static_cast<int>(pres.generators.size());
            pres.generators.emplace_back(s.v[0], s.v[1]);
        }
    auto edge = [&](int a, int b) { return edge_index.at({std::min(a, b), std::max(a, b)}); };

    for (const auto& s : slice.simplices)
        if (s.v.size() == 3) {
            const int x = s.v[0], y = s.v[1], z = s.v[2];
            // [y,z] * [x,y] * [x,z]^{-1}
            pres.relators.push_back({{edge(y, z), 1}, {edge(x, y), 1}, {edge(x, z), -1}});
        }

    // BFS spanning tree of the basepoint's component.
    std::vector<std::vector<std::pair<int, int>>> adj(slice.vertex_count);  // (neighbour, edge)
    for (std::size_t e = 0; e < pres.generators.size(); ++e) {
        auto [a, b] = pres.generators[e];
        adj[a].emplace_back(b, static_cast<int>(e));
        adj[b].emplace_back(a, static_cast<int>(e));
    }
    std::vector<char> visited(slice.vertex_count, 0);
    std::vector<char> in_tree(pres.generators.size(), 0);
    std::vector<int> queue{basepoint};
    visited[basepoint] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int v = queue[head];
        for (auto [w, e] : adj[v]) {
            if (visited[w]) continue;
            visited[w] = 1;
            in_tree[e] = 1;
            pres.spanning_tree.push_back(e);
            queue.push_back(w);
        }
    }
    std::sort(pres.spanning_tree.begin(), pres.spanning_tree.end());

    std::vector<int> pi1_index(pres.generators.size(), -1);
    for (std::size_t e = 0; e < pres.generators.size(); ++e) {
        auto [a, b] = pres.generators[e];
        if (!in_tree[e] && visited[a] && visited[b]) {
            pi1_index[e] = static_cast<int>(pres.pi1_generators.size());
            pres.pi1_generators.push_back(static_cast<int>(e));
        }
    }
    for (const auto& rel : pres.relators) {
        const auto [a, b] = pres.generators[rel.front().first];
        if (!visited[a] || !visited[b]) continue;  // other component
        std::vector<std::pair<int, int>> word;
        for (auto [e, exp] : rel)
            if (pi1_index[e] >= 0) word.emplace_back(pi1_index[e], exp);
        pres.pi1_relators.push_back(std::move(word));
    }
    return pres;
}

namespace {

// Canonical torsion form: primary decomposition (prime powers, ascending).
// Invariant factors of direct sums are not concatenations, so comparisons
// across computation routes go through this form.
std::vector<long long> to_primary(const std::vector<long long>& factors) {
    std::vector<long long> out;
    for (long long f : factors) {
        if (f <= 1) continue;
        for (long long q = 2; q * q <= f; ++q) {
            if (f % q) continue;
            long long power = 1;
            while (f % q == 0) {
                power *= q;
                f /= q;
            }
            out.push_back(power);
        }
        if (f > 1) out.push_back(f);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

AbelianInvariants abelianized_pi1(const GroupoidPresentation& pres) {
    const int gens = static_cast<int>(pres.pi1_generators.size());
    std::vector<std::vector<long long>> exponents(pres.pi1_relators.size(),
                                                  std::vector<long long>(gens, 0));
    for (std::size_t r = 0; r < pres.pi1_relators.size(); ++r)
        for (auto [g, exp] : pres.pi1_relators[r]) exponents[r][g] += exp;

    AbelianInvariants inv;
    auto factors = smith_normal_form(std::move(exponents));
    inv.free_rank = gens - static_cast<long long>(factors.size());
    inv.torsion = to_primary(factors);
    return inv;
}

namespace {

std::vector<std::vector<long long>> integer_boundary(const ComplexSlice& slice, int dim) {
    std::vector<Simplex> lower, upper;
    for (const auto& s : slice.simplices) {
        if (s.dim() == dim - 1) lower.push_back(s);
        if (s.dim() == dim) upper.push_back(s);
    }
    auto index_of = [&lower](const Simplex& s) {
        auto it = std::lower_bound(lower.begin(), lower.end(), s,
                                   [](const Simplex& a, const Simplex& b) {
                                       return simplex_less(a, b);
                                   });
        return static_cast<int>(it - lower.begin());
    };
    std::vector<std::vector<long long>> m(lower.size(), std::vector<long long>(upper.size(), 0));
    for (std::size_t j = 0; j < upper.size(); ++j) {
        const auto& s = upper[j];
        for (std::size_t drop = 0; drop < s.v.size(); ++drop) {
            Simplex facet;
            for (std::size_t i = 0; i < s.v.size(); ++i)
                if (i != drop) facet.v.push_back(s.v[i]);
            m[index_of(facet)][j] = (drop % 2 == 0) ? 1 : -1;
        }
    }
    return m;
}

}  // namespace

AbelianInvariants integral_h1(const ComplexSlice& slice) {
    int n1 = 0;
    for (const auto& s : slice.simplices)
        if (s.dim() == 1) ++n1;
    const auto d1 = integer_boundary(slice, 1);
    const auto d2 = integer_boundary(slice, 2);
    const int rank_d1 = integer_rank(d1);
    const auto d2_factors = smith_normal_form(d2);

    AbelianInvariants inv;
    inv.free_rank = n1 - rank_d1 - static_cast<long long>(d2_factors.size());
    inv.torsion = to_primary(d2_factors);
    return inv;
}

AbelianInvariants abelianized_pi1_all_components(const ComplexSlice& slice) {
    AbelianInvariants total;
    for (const auto& component : pi0(slice)) {
        auto pres = groupoid_presentation(slice, component.front());
        auto inv = abelianized_pi1(pres);
        total.free_rank += inv.free_rank;
        total.torsion.insert(total.torsion.end(), inv.torsion.begin(), inv.torsion.end());
    }
    std::sort(total.torsion.begin(), total.torsion.end());
    return total;
}

ComplexSlice order_complex(const ComplexSlice& slice, int chain_cap, const Budget& budget) {
    if (chain_cap < 0) throw validation_error("order_complex: chain_cap must be >= 0");
    const int n = static_cast<int>(slice.simplices.size());

    // subset_of[a] lists the indices of strict supersets of simplex a
    std::vector<std::vector<int>> supersets(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            if (slice.simplices[a].v.size() >= slice.simplices[b].v.size()) continue;
            if (std::includes(slice.simplices[b].v.begin(), slice.simplices[b].v.end(),
                              slice.simplices[a].v.begin(), slice.simplices[a].v.end()))
                supersets[a].push_back(b);
        }

    std::vector<Simplex> chains;
    std::vector<int> cur;
    std::size_t count = 0;
    auto grow = [&](auto&& self, int last) -> void {
        if (++count > budget.max_chains) throw budget_error("order_complex: chain budget exceeded");
        chains.push_back(Simplex{cur});
        if (static_cast<int>(cur.size()) > chain_cap) return;
        for (int next : supersets[last]) {
            cur.push_back(next);
            self(self, next);
            cur.pop_back();
        }
    };
    for (int a = 0; a < n; ++a) {
        cur.assign(1, a);
        grow(grow, a);
    }
    return ComplexSlice::from_simplices(n, std::move(chains), false);
}

ComplexSlice component_slice(const ComplexSlice& slice, const std::vector<int>& component) {
    std::vector<char> keep(slice.vertex_count, 0);
    for (int v : component) keep[v] = 1;
    std::vector<Simplex> out;
    for (const auto& s : slice.simplices)
        if (std::all_of(s.v.begin(), s.v.end(), [&](int v) { return keep[v]; })) out.push_back(s);
    return ComplexSlice::from_simplices(slice.vertex_count, std::move(out), false);
}

}  // namespace ripshom
