#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ripshom/common.hpp"
#include "ripshom/filtration.hpp"
#include "ripshom/invariants.hpp"
#include "ripshom/linalg.hpp"
#include "ripshom/metric.hpp"

namespace ripshom {

// Index of the level a shift by r lands on: least grid value >= s + r - tol,
// clamped to the terminal level (systems here are constant beyond the grid).
int shift_index(const PhaseGrid& grid, int s_index, double r, double tol = kDefaultTol);

// Index of the level in force at parameter t (greatest value <= t + tol).
int level_index(const PhaseGrid& grid, double t, double tol = kDefaultTol);

// A system of finite sets over a phase grid, constant between grid values
// and after the last one. Elements of level i are 0..sizes[i]-1.
struct SetSystem {
    PhaseGrid grid;
    std::vector<int> sizes;
    std::vector<std::vector<int>> steps;  // steps[i]: level i -> level i+1

    void validate() const;
    int levels() const { return static_cast<int>(sizes.size()); }
    std::vector<int> transition(int from, int to) const;  // composed step table
    SetSystem refined(const PhaseGrid& finer, double tol = kDefaultTol) const;
};

// A system of GF(p) vector spaces over a phase grid.
struct VecSystem {
    PhaseGrid grid;
    int p = 2;
    std::vector<int> dims;
    std::vector<FpMatrix> steps;  // steps[i]: dims[i] -> dims[i+1]

    void validate() const;
    int levels() const { return static_cast<int>(dims.size()); }
    FpMatrix transition(int from, int to) const;
    VecSystem refined(const PhaseGrid& finer, double tol = kDefaultTol) const;
};

// Natural transformations; construction refines mismatched grids to their
// union and asserts every naturality square exactly.
struct SetSystemMap {
    SetSystem source, target;
    std::vector<std::vector<int>> levels;

    SetSystemMap(SetSystem source_, SetSystem target_, std::vector<std::vector<int>> levels_,
                 double tol = kDefaultTol);
};

struct VecSystemMap {
    VecSystem source, target;
    std::vector<FpMatrix> levels;

    VecSystemMap(VecSystem source_, VecSystem target_, std::vector<FpMatrix> levels_,
                 double tol = kDefaultTol);
};

// First counterexample found by a predicate sweep, for reports.
struct PredicateWitness {
    double s = 0.0;
    std::string condition;       // "mono" or "epi"
    std::vector<int> elements;   // offending element(s) at level s
};

struct RIsoVerdict {
    bool mono = false;
    bool epi = false;
    std::optional<PredicateWitness> failure;

    bool iso() const { return mono && epi; }
};

RIsoVerdict r_iso_verdict(const SetSystemMap& f, double r, double tol = kDefaultTol);
RIsoVerdict r_iso_verdict(const VecSystemMap& f, double r, double tol = kDefaultTol);

bool is_r_mono(const SetSystemMap& f, double r, double tol = kDefaultTol);
bool is_r_epi(const SetSystemMap& f, double r, double tol = kDefaultTol);
bool is_r_iso(const SetSystemMap& f, double r, double tol = kDefaultTol);
bool is_r_mono(const VecSystemMap& f, double r, double tol = kDefaultTol);
bool is_r_epi(const VecSystemMap& f, double r, double tol = kDefaultTol);
bool is_r_iso(const VecSystemMap& f, double r, double tol = kDefaultTol);

// g after f; f: A -> B, g: B -> C over matching systems.
SetSystemMap compose(const SetSystemMap& f, const SetSystemMap& g);
VecSystemMap compose(const VecSystemMap& f, const VecSystemMap& g);

// The three cyclic readings of the triangle bound: two maps carry bounds
// r and s, the remaining one must be an (r+s)-isomorphism. Returns the
// implication (vacuously true when the hypotheses fail).
enum class TriangleCase {
    ComposeBound,  // f r-iso, g s-iso => g∘f (r+s)-iso
    LeftFactor,    // g∘f r-iso, g s-iso => f (r+s)-iso
    RightFactor,   // g∘f r-iso, f s-iso => g (r+s)-iso
};

bool composition_bound_holds(const SetSystemMap& f, const SetSystemMap& g, double r, double s,
                             TriangleCase which, double tol = kDefaultTol);
bool composition_bound_holds(const VecSystemMap& f, const VecSystemMap& g, double r, double s,
                             TriangleCase which, double tol = kDefaultTol);

// Levelwise pushout of sets B ⊔_A C with the induced transitions and the
// structure maps into the pushout.
struct SetSystemPushout {
    SetSystem pushout;
    SetSystemMap from_b;
    SetSystemMap from_c;
};

SetSystemPushout pushout_set_systems(const SetSystemMap& f, const SetSystemMap& g);

// Least grid-realizable radius at which every bundled map is an r-iso;
// candidates are pairwise differences of grid values.
struct InvariantBundle {
    std::vector<SetSystemMap> set_maps;
    std::vector<VecSystemMap> vec_maps;
};

std::optional<double> controlled_equivalence_radius(const InvariantBundle& bundle,
                                                    double tol = kDefaultTol);
std::optional<double> minimal_iso_radius(const SetSystemMap& f, double tol = kDefaultTol);
std::optional<double> minimal_iso_radius(const VecSystemMap& f, double tol = kDefaultTol);

// ---- systems extracted from filtered complexes ----

// Birth-valued downward-closed complex over a fixed vertex universe; the
// common substrate for system extraction and glueing.
struct FilteredComplex {
    int vertex_count = 0;
    std::vector<std::pair<Simplex, double>> simplices;  // sorted by simplex_less

    static FilteredComplex from_rips(const BifilteredComplex& complex);
    static FilteredComplex from_degree_rips(const BifilteredComplex& complex, int k);

    void validate(double tol = kDefaultTol) const;
    ComplexSlice slice_at(double t, double tol = kDefaultTol) const;
    std::vector<double> birth_values() const;
};

PhaseGrid merged_grid(const std::vector<const FilteredComplex*>& complexes,
                      double tol = kDefaultTol);

// Betti numbers at every grid value over GF(p) in degrees 0..max_k, by one
// incremental rank sweep per boundary degree: filtration columns only ever
// arrive, so each boundary matrix is reduced once across the whole grid.
std::vector<std::vector<int>> betti_curves(const FilteredComplex& complex, const PhaseGrid& grid,
                                           int p, int max_k, double tol = kDefaultTol);

// Component counts at every grid value (incremental union-find).
std::vector<int> component_curve(const FilteredComplex& complex, const PhaseGrid& grid,
                                 double tol = kDefaultTol);

SetSystem pi0_system(const FilteredComplex& complex, const PhaseGrid& grid,
                     double tol = kDefaultTol);
SetSystemMap pi0_system_map(const FilteredComplex& src, const FilteredComplex& dst,
                            const std::vector<int>& vertex_map, const PhaseGrid& grid,
                            double tol = kDefaultTol);
VecSystem homology_system(const FilteredComplex& complex, const PhaseGrid& grid, int p, int degree,
                          double tol = kDefaultTol);
VecSystemMap homology_system_map(const FilteredComplex& src, const FilteredComplex& dst,
                                 const std::vector<int>& vertex_map, const PhaseGrid& grid, int p,
                                 int degree, double tol = kDefaultTol);

// Glueing D = B ⊔_A C along a levelwise inclusion A -> B and a vertex
// injection A -> C. Births must agree on A (checked); D carries the union
// with min births on overlaps outside A.
struct GluedComplexes {
    FilteredComplex a, b, c, d;
    std::vector<int> a_to_b, a_to_c, b_to_d, c_to_d;
};

GluedComplexes glue_filtered_complexes(const FilteredComplex& a, const FilteredComplex& b,
                                       const std::vector<int>& a_to_b, const FilteredComplex& c,
                                       const std::vector<int>& a_to_c, double tol = kDefaultTol);

// Invariant systems of all four corners of a glueing, with the maps the
// glueing results quantify over.
struct GluedSystems {
    GluedComplexes complexes;
    PhaseGrid grid;
    SetSystemMap pi0_ab, pi0_cd;
    struct HomologyPair {
        int p = 2;
        int degree = 0;
        VecSystemMap ab, cd;
    };
    std::vector<HomologyPair> homology;
};

GluedSystems glue_complex_systems(const FilteredComplex& a, const FilteredComplex& b,
                                  const std::vector<int>& a_to_b, const FilteredComplex& c,
                                  const std::vector<int>& a_to_c, const std::vector<int>& primes,
                                  int max_k, double tol = kDefaultTol);

// The invariant maps of a nested pair (member complex -> ambient complex),
// the bundle the controlled-equivalence sweep runs on.
InvariantBundle pair_invariant_bundle(const SubsetPair& pair, int dim_cap,
                                      const std::vector<int>& primes, int max_k,
                                      double tol = kDefaultTol, const Budget& budget = {});

}  // namespace ripshom
