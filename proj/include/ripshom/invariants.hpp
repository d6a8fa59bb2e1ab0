#pragma once

#include <optional>
#include <vector>

#include "ripshom/common.hpp"
#include "ripshom/filtration.hpp"
#include "ripshom/linalg.hpp"

namespace ripshom {

// A fixed complex at one parameter value: a downward-closed simplex list
// over vertices 0..vertex_count-1. Vertices of every simplex must be
// present as singletons.
struct ComplexSlice {
    int vertex_count = 0;
    std::vector<Simplex> simplices;  // sorted by simplex_less

    static ComplexSlice from_simplices(int vertex_count, std::vector<Simplex> simplices,
                                       bool validate = true);

    // Vertices present as singletons, ascending.
    std::vector<int> vertices() const;
    bool contains(const Simplex& s) const;
    int max_dim() const;
};

// Partition of the slice's vertices by 1-simplex connectivity; classes
// sorted by least member, members ascending.
std::vector<std::vector<int>> pi0(const ComplexSlice& slice);

// Simplicial chain complex over GF(p): per-dimension ordered bases plus
// boundary matrices, with the deterministic basis order of simplex_less.
// Construction asserts boundary-of-boundary = 0.
class FieldChainComplex {
  public:
    FieldChainComplex(const ComplexSlice& slice, int p, int max_dim);

    int prime() const { return p_; }
    int max_dim() const { return static_cast<int>(bases_.size()) - 1; }
    const std::vector<Simplex>& basis(int dim) const { return bases_[dim]; }
    // boundary(d): matrix from d-chains to (d-1)-chains; boundary(0) has 0 rows.
    const FpMatrix& boundary(int dim) const { return boundaries_[dim]; }

    int basis_index(int dim, const Simplex& s) const;  // -1 when absent

  private:
    int p_;
    std::vector<std::vector<Simplex>> bases_;
    std::vector<FpMatrix> boundaries_;
};

// Homology of one slice over GF(p) with a deterministic representative
// basis per degree, supporting coordinate computations for induced maps.
class HomologyBasis {
  public:
    HomologyBasis(const ComplexSlice& slice, int p, int max_k);

    int betti(int k) const { return static_cast<int>(reps_[k].size()); }
    int max_k() const { return static_cast<int>(reps_.size()) - 1; }
    const FieldChainComplex& chains() const { return chains_; }

    // Representative cycle of the i-th basis class in degree k, as a chain
    // coordinate vector over the degree-k simplex basis.
    const std::vector<uint32_t>& representative(int k, int i) const { return reps_[k][i]; }

    // Homology coordinates of an arbitrary cycle; throws if the vector is
    // not a cycle of this complex.
    std::vector<uint32_t> coordinates(int k, std::vector<uint32_t> cycle) const;

  private:
    FieldChainComplex chains_;
    std::vector<std::vector<std::vector<uint32_t>>> reps_;  // [k][class][chain coord]
    std::vector<FpColumnSpace> spaces_;  // boundaries untracked, cycles tracked
    std::vector<std::vector<int>> rep_offer_index_;  // tracked offer of each class
};

std::vector<int> homology_ranks(const ComplexSlice& slice, int p, int max_k);

// Matrix of the map induced in degree-k homology by a simplicial vertex
// map src -> dst (degenerate images vanish, orientation by sort parity).
// Bases are the deterministic ones of HomologyBasis.
FpMatrix vertex_map_homology(const ComplexSlice& src, const ComplexSlice& dst,
                             const std::vector<int>& vertex_map, int p, int k);
FpMatrix vertex_map_homology(const HomologyBasis& src, const HomologyBasis& dst,
                             const std::vector<int>& vertex_map, int k);

// Inclusion-induced map on homology; `sub`'s simplices must all be present
// in `super` (same vertex numbering).
FpMatrix induced_homology_map(const ComplexSlice& sub, const ComplexSlice& super, int p, int k);

// Free-groupoid-style presentation of a slice: generators are unordered
// edges, one relator per triangle, and a spanning-tree-reduced
// presentation of the loop group at the basepoint.
struct GroupoidPresentation {
    std::vector<int> objects;                 // vertices of the slice
    std::vector<std::pair<int, int>> generators;  // edges (x, y), x < y
    // relator per triangle [x,y,z]: [y,z] * [x,y] * [x,z]^(-1), as
    // (generator index, exponent ±1) letters.
    std::vector<std::vector<std::pair<int, int>>> relators;

    int basepoint = -1;
    std::vector<int> spanning_tree;   // generator indices of the BFS tree
    std::vector<int> pi1_generators;  // non-tree generator indices in the component
    // Triangle relators rewritten through the tree collapse; letters index
    // pi1_generators.
    std::vector<std::vector<std::pair<int, int>>> pi1_relators;
};

GroupoidPresentation groupoid_presentation(const ComplexSlice& slice, int basepoint);

// Invariant factors and free rank of a finitely presented abelian group.
struct AbelianInvariants {
    long long free_rank = 0;
    std::vector<long long> torsion;  // invariant factors > 1, divisibility order

    bool operator==(const AbelianInvariants& o) const = default;
};

AbelianInvariants abelianized_pi1(const GroupoidPresentation& pres);

// Integral H1 of a slice via Smith normal form of the boundary matrices;
// the independent route against which abelianized_pi1 is checked.
AbelianInvariants integral_h1(const ComplexSlice& slice);

// Sum of the loop-group abelianizations over all components of the slice.
AbelianInvariants abelianized_pi1_all_components(const ComplexSlice& slice);

// Complex of strict inclusion chains of the slice's simplices, up to chain
// dimension chain_cap. Homology agrees with the slice in degrees
// <= chain_cap - 1.
ComplexSlice order_complex(const ComplexSlice& slice, int chain_cap, const Budget& budget = {});

// Subcomplex spanned by the vertices of one pi0 class.
ComplexSlice component_slice(const ComplexSlice& slice, const std::vector<int>& component);

}  // namespace ripshom
