#include "ripshom/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>

#include "ripshom/io.hpp"

namespace ripshom::cli {

void RunConfig::validate() const {
    if (dim_cap < 0) throw validation_error("dim_cap must be >= 0");
    if (deg_cap < 0) throw validation_error("deg_cap must be >= 0");
    if (tolerance <= 0) throw validation_error("tolerance must be positive");
    if (primes.empty()) throw validation_error("at least one prime is required");
    for (int p : primes)
        if (!is_prime(p)) throw validation_error("not a prime: " + std::to_string(p));
}

namespace {

SubsetPair make_pair(const RunConfig& config, const MetricPoints& points) {
    if (config.subset_indices.empty())
        throw validation_error("this command needs --subset-indices");
    return SubsetPair(points, config.subset_indices);
}

int homology_degrees(const RunConfig& config) { return std::max(config.dim_cap - 1, 0); }

}  // namespace

int cmd_invariants(const RunConfig& config) {
    config.validate();
    const auto points = load_points(config.input, config.tolerance);
    auto complex = build_rips(points, config.dim_cap, config.budget());
    const int deg_cap = config.deg_cap;
    complex = fill_degree_births(std::move(complex), deg_cap);
    const auto grid = phase_grid(points, config.tolerance);
    const int max_k = homology_degrees(config);

    Json report;
    report["input"] = config.input.string();
    report["dim_cap"] = config.dim_cap;
    report["deg_cap"] = deg_cap;
    report["primes"] = config.primes;
    report["tolerance"] = config.tolerance;
    report["grid"] = grid.values;

    std::string csv = "s,k";
    for (int kk = 0; kk <= max_k; ++kk) csv += ",b" + std::to_string(kk);
    csv += "\n";

    Json slices = Json::array();
    for (int k = 0; k <= deg_cap; ++k) {
        const auto filtered = FilteredComplex::from_degree_rips(complex, k);
        const auto components = component_curve(filtered, grid, config.tolerance);
        std::vector<std::vector<std::vector<int>>> curves;  // per prime, per grid value
        for (int p : config.primes)
            curves.push_back(betti_curves(filtered, grid, p, max_k, config.tolerance));

        // loop-group data changes only when the slice does
        std::size_t previous_size = static_cast<std::size_t>(-1);
        Json previous_pi1;
        for (int i = 0; i < grid.size(); ++i) {
            const double s = grid.values[i];
            Json item;
            item["s"] = s;
            item["k"] = k;
            item["pi0"] = components[i];
            Json betti;
            for (std::size_t pi = 0; pi < config.primes.size(); ++pi)
                betti[std::to_string(config.primes[pi])] = curves[pi][i];
            item["betti"] = std::move(betti);

            const auto slice = filtered.slice_at(s, config.tolerance);
            if (slice.simplices.size() != previous_size) {
                int generators = 0, relators = 0;
                AbelianInvariants total;
                for (const auto& component : pi0(slice)) {
                    const auto pres = groupoid_presentation(slice, component.front());
                    generators += static_cast<int>(pres.pi1_generators.size());
                    relators += static_cast<int>(pres.pi1_relators.size());
                    const auto inv = abelianized_pi1(pres);
                    total.free_rank += inv.free_rank;
                    total.torsion.insert(total.torsion.end(), inv.torsion.begin(),
                                         inv.torsion.end());
                }
                std::sort(total.torsion.begin(), total.torsion.end());
                Json pi1;
                pi1["generators"] = generators;
                pi1["relators"] = relators;
                pi1["abelianization"] = abelian_to_json(total);
                previous_pi1 = std::move(pi1);
                previous_size = slice.simplices.size();
            }
            item["pi1"] = previous_pi1;
            slices.push_back(std::move(item));

            csv += Json(s).dump() + "," + std::to_string(k);
            for (int b : curves[0][i]) csv += "," + std::to_string(b);
            csv += "\n";
        }
    }
    report["slices"] = std::move(slices);

    write_atomic(config.out, report.dump(2) + "\n");
    if (!config.csv_out.empty()) write_atomic(config.csv_out, csv);
    if (!config.complex_out.empty())
        write_atomic(config.complex_out, complex_to_json(complex).dump(2) + "\n");
    return kExitOk;
}

int cmd_stability(const RunConfig& config) {
    config.validate();
    if (!config.r) throw validation_error("cmd_stability needs --r");
    const auto points = load_points(config.input, config.tolerance);
    const auto pair = make_pair(config, points);
    const auto cert = verify_interleaving(pair, *config.r, config.k, config.dim_cap,
                                          config.tolerance, TieRule::LeastIndex, config.budget());
    write_atomic(config.out, certificate_to_json(cert).dump(2) + "\n");
    if (!cert.overall) {
        std::cerr << "certificate FAILED: an interleaving property does not hold\n";
        return kExitTheoremViolation;
    }
    return kExitOk;
}

int cmd_systems(const RunConfig& config) {
    config.validate();
    Json report;
    if (!config.system_map_file.empty()) {
        std::ifstream in(config.system_map_file);
        if (!in)
            throw validation_error("cannot open system map file: " +
                                   config.system_map_file.string());
        const auto doc = Json::parse(in);
        const bool vector_valued = doc.at("source").contains("p");
        if (vector_valued) {
            const auto map = vec_system_map_from_json(doc);
            const auto radius = minimal_iso_radius(map, config.tolerance);
            report["radius"] = radius ? Json(*radius) : Json("none");
            const double at = config.r.value_or(radius.value_or(0.0));
            report["verdict"] = verdict_to_json(r_iso_verdict(map, at, config.tolerance), at);
        } else {
            const auto map = set_system_map_from_json(doc);
            const auto radius = minimal_iso_radius(map, config.tolerance);
            report["radius"] = radius ? Json(*radius) : Json("none");
            const double at = config.r.value_or(radius.value_or(0.0));
            report["verdict"] = verdict_to_json(r_iso_verdict(map, at, config.tolerance), at);
        }
    } else {
        const auto points = load_points(config.input, config.tolerance);
        const auto pair = make_pair(config, points);
        const auto bundle = pair_invariant_bundle(pair, config.dim_cap, config.primes,
                                                  homology_degrees(config), config.tolerance,
                                                  config.budget());
        const auto radius = controlled_equivalence_radius(bundle, config.tolerance);
        report["radius"] = radius ? Json(*radius) : Json("none");
        Json maps = Json::array();
        const double at = config.r.value_or(radius.value_or(0.0));
        {
            Json m = verdict_to_json(r_iso_verdict(bundle.set_maps.front(), at, config.tolerance),
                                     at);
            m["kind"] = "pi0";
            maps.push_back(std::move(m));
        }
        std::size_t idx = 0;
        for (int p : config.primes)
            for (int k = 0; k <= homology_degrees(config); ++k, ++idx) {
                Json m = verdict_to_json(
                    r_iso_verdict(bundle.vec_maps[idx], at, config.tolerance), at);
                m["kind"] = "homology";
                m["p"] = p;
                m["degree"] = k;
                maps.push_back(std::move(m));
            }
        report["maps"] = std::move(maps);
    }
    write_atomic(config.out, report.dump(2) + "\n");
    return kExitOk;
}

namespace {

struct CliRng {
    std::mt19937_64 gen;

    explicit CliRng(uint64_t seed) : gen(seed) {}

    double unit() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
    int below(int n) { return static_cast<int>(gen() % static_cast<uint64_t>(n)); }
    int between(int lo, int hi) { return lo + below(hi - lo + 1); }
};

// nested random data sets X ⊂ Y ⊂ Z in the unit square
struct Chain {
    MetricPoints z;
    std::vector<int> y_in_z;  // sorted
    std::vector<int> x_in_z;  // sorted, subset of y_in_z
};

Chain random_chain(CliRng& rng) {
    const int n = rng.between(3, 7);
    std::vector<std::vector<double>> coords(n);
    for (auto& c : coords) c = {rng.unit(), rng.unit()};
    Chain chain{MetricPoints::from_euclidean(coords), {}, {}};
    for (int i = 0; i < n; ++i)
        if (rng.below(3) != 0) chain.y_in_z.push_back(i);
    if (chain.y_in_z.empty()) chain.y_in_z.push_back(rng.below(n));
    for (int i : chain.y_in_z)
        if (rng.below(2) != 0) chain.x_in_z.push_back(i);
    if (chain.x_in_z.empty()) chain.x_in_z.push_back(chain.y_in_z.front());
    return chain;
}

}  // namespace

int cmd_proptest(const RunConfig& config) {
    config.validate();
    CliRng rng(config.seed);
    const int max_k = homology_degrees(config);

    int triangle_checked = 0, pushout_checked = 0, monotone_checked = 0;
    int failures = 0;
    const Budget budget = config.budget();
    for (int t = 0; t < config.count; ++t) {
        const Chain chain = random_chain(rng);
        const auto z_complex =
            FilteredComplex::from_rips(build_rips(chain.z, config.dim_cap, budget));
        const auto y_points = chain.z.restrict(chain.y_in_z);
        const auto y_complex =
            FilteredComplex::from_rips(build_rips(y_points, config.dim_cap, budget));
        std::vector<int> x_in_y;
        for (std::size_t i = 0; i < chain.y_in_z.size(); ++i)
            if (std::binary_search(chain.x_in_z.begin(), chain.x_in_z.end(), chain.y_in_z[i]))
                x_in_y.push_back(static_cast<int>(i));
        const auto x_points = y_points.restrict(x_in_y);
        const auto x_complex =
            FilteredComplex::from_rips(build_rips(x_points, config.dim_cap, budget));

        std::vector<const FilteredComplex*> all{&x_complex, &y_complex, &z_complex};
        const auto grid = merged_grid(all, config.tolerance);

        // composition bound on the nested pi0 maps
        const auto f = pi0_system_map(x_complex, y_complex, x_in_y, grid, config.tolerance);
        const auto g = pi0_system_map(y_complex, z_complex, chain.y_in_z, grid, config.tolerance);
        const auto rf = minimal_iso_radius(f, config.tolerance);
        const auto rg = minimal_iso_radius(g, config.tolerance);
        if (rf && rg) {
            ++triangle_checked;
            if (!is_r_iso(compose(f, g), *rf + *rg, config.tolerance)) ++failures;
            ++monotone_checked;
            if (!is_r_iso(f, *rf + 0.5, config.tolerance)) ++failures;
        }

        // pushout of the pi0 inclusion along itself stays controlled
        if (rf) {
            ++pushout_checked;
            const auto result = pushout_set_systems(f, f);
            if (!is_r_iso(result.from_c, *rf, config.tolerance)) ++failures;
        }

        // homology triangle bound for the first prime in degrees <= max_k
        for (int k = 0; k <= max_k; ++k) {
            const auto hf = homology_system_map(x_complex, y_complex, x_in_y, grid,
                                                config.primes.front(), k, config.tolerance);
            const auto hg = homology_system_map(y_complex, z_complex, chain.y_in_z, grid,
                                                config.primes.front(), k, config.tolerance);
            const auto rhf = minimal_iso_radius(hf, config.tolerance);
            const auto rhg = minimal_iso_radius(hg, config.tolerance);
            if (rhf && rhg) {
                ++triangle_checked;
                if (!is_r_iso(compose(hf, hg), *rhf + *rhg, config.tolerance)) ++failures;
            }
        }
    }

    Json report;
    report["seed"] = config.seed;
    report["count"] = config.count;
    report["triangle_checked"] = triangle_checked;
    report["pushout_checked"] = pushout_checked;
    report["monotone_checked"] = monotone_checked;
    report["failures"] = failures;
    report["pass"] = failures == 0;
    write_atomic(config.out, report.dump(2) + "\n");
    if (failures > 0) {
        std::cerr << "proptest FAILED: " << failures << " property violations\n";
        return kExitTheoremViolation;
    }
    return kExitOk;
}

int run_guarded(const RunConfig& config, int (*command)(const RunConfig&)) {
    try {
        return command(config);
    } catch (const budget_error& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kExitBudget;
    } catch (const inconsistency_error& e) {
        std::cerr << "internal inconsistency (bug): " << e.what() << "\n";
        return kExitTheoremViolation;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const Json::exception& e) {
        std::cerr << "malformed input: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}

}  // namespace ripshom::cli
