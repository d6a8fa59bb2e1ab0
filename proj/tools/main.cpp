// Command-line front door: ingest point data, run the filtration,
// invariant, stability and system pipelines, emit JSON reports and CSV
// Betti curves. Exit codes: 0 ok, 1 validation/hypothesis, 2 budget,
// 3 property violation.

#include <CLI11.hpp>

#include <sstream>

#include "ripshom/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Rips and degree-Rips homotopy toolkit"};
    app.require_subcommand(1);

    ripshom::cli::RunConfig config;
    std::string subset_spec, primes_spec = "2";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", config.out, "output JSON path")->required();
        cmd->add_option("--dim-cap", config.dim_cap, "maximum simplex dimension");
        cmd->add_option("--tolerance", config.tolerance, "comparison tolerance");
    };
    auto parse_list = [](const std::string& spec) {
        std::vector<int> out;
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) out.push_back(std::stoi(item));
        return out;
    };

    auto* invariants = app.add_subcommand("invariants", "per-slice invariant report");
    invariants->add_option("--input", config.input, "points CSV/JSON or distance JSON")
        ->required();
    invariants->add_option("--deg-cap", config.deg_cap, "maximum neighbour degree");
    invariants->add_option("--primes", primes_spec, "comma-separated primes");
    invariants->add_option("--csv", config.csv_out, "Betti curve CSV path");
    invariants->add_option("--complex-out", config.complex_out, "complex export JSON path");
    add_common(invariants);

    auto* stability = app.add_subcommand("stability", "interleaving certificate");
    stability->add_option("--input", config.input)->required();
    stability->add_option("--subset-indices", subset_spec, "comma-separated member indices")
        ->required();
    double r_value = 0;
    auto* r_opt = stability->add_option("--r", r_value, "shift radius");
    r_opt->required();
    stability->add_option("--k", config.k, "neighbour degree");
    add_common(stability);

    auto* systems = app.add_subcommand("systems", "controlled equivalence verdicts");
    systems->add_option("--input", config.input);
    systems->add_option("--subset-indices", subset_spec);
    systems->add_option("--system-map", config.system_map_file, "serialized system map JSON");
    double r_sys = -1;
    auto* r_sys_opt = systems->add_option("--r", r_sys, "evaluate verdicts at this radius");
    systems->add_option("--primes", primes_spec);
    add_common(systems);

    auto* proptest = app.add_subcommand("proptest", "seeded calculus self-check");
    proptest->add_option("--seed", config.seed, "random seed");
    proptest->add_option("--count", config.count, "instance count");
    proptest->add_option("--primes", primes_spec);
    add_common(proptest);

    CLI11_PARSE(app, argc, argv);

    try {
        config.primes = parse_list(primes_spec);
        config.subset_indices = parse_list(subset_spec);
    } catch (const std::exception&) {
        std::cerr << "error: malformed integer list\n";
        return ripshom::cli::kExitValidation;
    }
    if (r_opt->count() > 0 || (r_sys_opt->count() > 0)) config.r = r_opt->count() ? r_value : r_sys;

    using ripshom::cli::run_guarded;
    if (invariants->parsed()) return run_guarded(config, ripshom::cli::cmd_invariants);
    if (stability->parsed()) return run_guarded(config, ripshom::cli::cmd_stability);
    if (systems->parsed()) return run_guarded(config, ripshom::cli::cmd_systems);
    return run_guarded(config, ripshom::cli::cmd_proptest);
}
