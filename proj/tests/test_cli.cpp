#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "ripshom/cli.hpp"
#include "ripshom/io.hpp"

using namespace ripshom;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;

    TempDir() {
        path = fs::temp_directory_path() / ("ripshom_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }

    fs::path file(const std::string& name) const { return path / name; }
};

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("point ingestion") {
    TempDir dir;

    SUBCASE("csv points") {
        write_file(dir.file("pts.csv"), "0,0\n3,4\n");
        auto pts = load_points(dir.file("pts.csv"));
        CHECK(pts.size() == 2);
        CHECK(pts.dist(0, 1) == doctest::Approx(5.0));
    }
    SUBCASE("json points") {
        write_file(dir.file("pts.json"), R"({"points": [[0], [2], [5]]})");
        auto pts = load_points(dir.file("pts.json"));
        CHECK(pts.size() == 3);
        CHECK(pts.dist(1, 2) == doctest::Approx(3.0));
    }
    SUBCASE("json distance matrix") {
        write_file(dir.file("dist.json"),
                   R"({"labels": ["a", "b"], "dist": [[0, 2], [2, 0]]})");
        auto pts = load_points(dir.file("dist.json"));
        CHECK(pts.labels() == std::vector<std::string>{"a", "b"});
        CHECK(pts.dist(0, 1) == doctest::Approx(2.0));
    }
    SUBCASE("invalid distance matrix is a hard error") {
        write_file(dir.file("bad.json"), R"({"dist": [[0, 1, 9], [1, 0, 1], [9, 1, 0]]})");
        CHECK_THROWS_AS(load_points(dir.file("bad.json")), validation_error);
    }
    SUBCASE("garbage csv") {
        write_file(dir.file("bad.csv"), "1,hello\n");
        CHECK_THROWS_AS(load_points(dir.file("bad.csv")), validation_error);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_points(dir.file("absent.csv")), validation_error);
    }
}

TEST_CASE("config validation") {
    cli::RunConfig config;
    config.primes = {4};
    CHECK_THROWS_AS(config.validate(), validation_error);
    config.primes = {2, 3};
    config.tolerance = 0;
    CHECK_THROWS_AS(config.validate(), validation_error);
    config.tolerance = 1e-9;
    CHECK_NOTHROW(config.validate());
}

TEST_CASE("invariants command") {
    TempDir dir;
    cli::RunConfig config;
    config.out = dir.file("report.json");
    config.csv_out = dir.file("betti.csv");
    config.deg_cap = 0;

    SUBCASE("equilateral triangle component curve") {
        write_file(dir.file("tri.json"), R"({"dist": [[0,1,1],[1,0,1],[1,1,0]]})");
        config.input = dir.file("tri.json");
        REQUIRE(cli::cmd_invariants(config) == cli::kExitOk);
        const auto report = Json::parse(read_file(config.out));
        REQUIRE(report["grid"].size() == 2);
        CHECK(report["slices"][0]["pi0"] == 3);
        CHECK(report["slices"][1]["pi0"] == 1);
        CHECK(report["slices"][1]["betti"]["2"][0] == 1);
    }
    SUBCASE("unit square loop curve") {
        write_file(dir.file("sq.csv"), "0,0\n1,0\n1,1\n0,1\n");
        config.input = dir.file("sq.csv");
        REQUIRE(cli::cmd_invariants(config) == cli::kExitOk);
        const auto report = Json::parse(read_file(config.out));
        std::vector<int> b1;
        for (const auto& slice : report["slices"])
            if (slice["k"] == 0) b1.push_back(slice["betti"]["2"][1]);
        CHECK(b1 == std::vector<int>{0, 1, 0});
    }
    SUBCASE("single point") {
        write_file(dir.file("one.csv"), "7,7\n");
        config.input = dir.file("one.csv");
        REQUIRE(cli::cmd_invariants(config) == cli::kExitOk);
        const auto report = Json::parse(read_file(config.out));
        REQUIRE(report["slices"].size() == 1);
        CHECK(report["slices"][0]["pi0"] == 1);
        CHECK(read_file(config.csv_out) == "s,k,b0,b1\n0.0,0,1,0\n");
    }
}

TEST_CASE("stability command exit codes") {
    TempDir dir;
    write_file(dir.file("line.csv"), "0\n1\n3\n");
    cli::RunConfig config;
    config.input = dir.file("line.csv");
    config.out = dir.file("cert.json");
    config.subset_indices = {0, 2};

    SUBCASE("pass") {
        config.r = 1.1;
        CHECK(cli::cmd_stability(config) == cli::kExitOk);
        const auto cert = Json::parse(read_file(config.out));
        CHECK(cert["overall"] == true);
        CHECK(cert["grid"].size() == 4);
    }
    SUBCASE("hypothesis failure maps to exit 1") {
        config.r = 0.9;
        CHECK(cli::run_guarded(config, cli::cmd_stability) == cli::kExitValidation);
    }
    SUBCASE("degree certificate") {
        config.r = 2.2;
        config.k = 1;
        CHECK(cli::cmd_stability(config) == cli::kExitOk);
        const auto cert = Json::parse(read_file(config.out));
        CHECK(cert["k"] == 1);
        CHECK(cert["overall"] == true);
    }
}

TEST_CASE("malformed json input maps to exit 1") {
    TempDir dir;
    write_file(dir.file("broken.json"), "{not json");
    cli::RunConfig config;
    config.input = dir.file("broken.json");
    config.out = dir.file("report.json");
    CHECK(cli::run_guarded(config, cli::cmd_invariants) == cli::kExitValidation);
}

TEST_CASE("systems command") {
    TempDir dir;
    cli::RunConfig config;
    config.out = dir.file("verdict.json");

    SUBCASE("identical pair has radius zero") {
        write_file(dir.file("line.csv"), "0\n1\n3\n");
        config.input = dir.file("line.csv");
        config.subset_indices = {0, 1, 2};
        REQUIRE(cli::cmd_systems(config) == cli::kExitOk);
        const auto verdict = Json::parse(read_file(config.out));
        CHECK(verdict["radius"] == 0.0);
    }
    SUBCASE("line pair radius is within twice the Hausdorff distance") {
        write_file(dir.file("line.csv"), "0\n1\n3\n");
        config.input = dir.file("line.csv");
        config.subset_indices = {0, 2};
        REQUIRE(cli::cmd_systems(config) == cli::kExitOk);
        const auto verdict = Json::parse(read_file(config.out));
        CHECK(verdict["radius"].get<double>() <= 2.0);
        CHECK(verdict["maps"][0]["mono"] == true);
        CHECK(verdict["maps"][0]["epi"] == true);
    }
    SUBCASE("serialized system map") {
        Json doc;
        doc["source"] = {{"grid", {0.0, 1.0}}, {"sizes", {1, 1}}, {"steps", {{0}}}};
        doc["target"] = {{"grid", {0.0, 1.0}}, {"sizes", {2, 1}}, {"steps", {{0, 0}}}};
        doc["levels"] = {{0}, {0}};
        write_file(dir.file("map.json"), doc.dump());
        config.system_map_file = dir.file("map.json");
        REQUIRE(cli::cmd_systems(config) == cli::kExitOk);
        const auto verdict = Json::parse(read_file(config.out));
        CHECK(verdict["radius"] == 1.0);
    }
    SUBCASE("serialized vector system map") {
        // source: F2 -> F2 identity; target: F2^2 -> F2 projection; the
        // map embeds into the first coordinate, so epi needs one shift
        Json doc;
        doc["source"] = {{"grid", {0.0, 1.0}}, {"p", 2}, {"dims", {1, 1}}, {"steps", {{{1}}}}};
        doc["target"] = {{"grid", {0.0, 1.0}}, {"p", 2}, {"dims", {2, 1}}, {"steps", {{{1, 0}}}}};
        doc["levels"] = {{{1}, {0}}, {{1}}};
        write_file(dir.file("vmap.json"), doc.dump());
        config.system_map_file = dir.file("vmap.json");
        REQUIRE(cli::cmd_systems(config) == cli::kExitOk);
        const auto verdict = Json::parse(read_file(config.out));
        CHECK(verdict["radius"] == 1.0);
        CHECK(verdict["verdict"]["mono"] == true);
    }
}

TEST_CASE("vector system json round-trip") {
    VecSystem sys;
    sys.grid.values = {0.0, 0.5, 2.0};
    sys.p = 3;
    sys.dims = {2, 1, 1};
    FpMatrix s0(1, 2, 3);
    s0.set(0, 0, 1);
    s0.set(0, 1, 2);
    FpMatrix s1(1, 1, 3);
    s1.set(0, 0, 2);
    sys.steps = {s0, s1};
    sys.validate();
    const auto doc = vec_system_to_json(sys);
    const auto back = vec_system_from_json(doc);
    CHECK(back.dims == sys.dims);
    CHECK(back.p == 3);
    CHECK(back.steps[0] == sys.steps[0]);
    CHECK(back.steps[1] == sys.steps[1]);
}

TEST_CASE("proptest command is deterministic and passes") {
    TempDir dir;
    cli::RunConfig config;
    config.out = dir.file("prop.json");
    config.seed = 23;
    config.count = 25;
    REQUIRE(cli::cmd_proptest(config) == cli::kExitOk);
    const auto first = read_file(config.out);
    REQUIRE(cli::cmd_proptest(config) == cli::kExitOk);
    CHECK(first == read_file(config.out));
    const auto report = Json::parse(first);
    CHECK(report["pass"] == true);
    CHECK(report["failures"] == 0);
}

TEST_CASE("complex export encodes absent births as null") {
    TempDir dir;
    write_file(dir.file("line.csv"), "0\n1\n3\n");
    cli::RunConfig config;
    config.input = dir.file("line.csv");
    config.out = dir.file("report.json");
    config.complex_out = dir.file("complex.json");
    config.deg_cap = 3;
    REQUIRE(cli::cmd_invariants(config) == cli::kExitOk);
    const auto doc = Json::parse(read_file(config.complex_out));
    CHECK(doc["dim_cap"] == 2);
    CHECK(doc["simplices"].size() == 7);
    for (const auto& item : doc["simplices"]) {
        REQUIRE(item["deg"].size() == 4);
        CHECK(item["deg"][0] == item["rips"]);
        CHECK(item["deg"][3].is_null());  // only three points, degree 3 never fires
    }
}

namespace {
int throws_budget(const cli::RunConfig&) { throw budget_error("synthetic"); }
int throws_inconsistency(const cli::RunConfig&) { throw inconsistency_error("synthetic"); }
}  // namespace

TEST_CASE("exit code mapping") {
    cli::RunConfig config;
    CHECK(cli::run_guarded(config, throws_budget) == cli::kExitBudget);
    CHECK(cli::run_guarded(config, throws_inconsistency) == cli::kExitTheoremViolation);
}

TEST_CASE("reports are byte-identical across runs") {
    TempDir dir;
    write_file(dir.file("pts.csv"), "0.1,0.9\n0.4,0.2\n0.8,0.5\n0.3,0.3\n");
    cli::RunConfig config;
    config.input = dir.file("pts.csv");
    config.out = dir.file("a.json");
    config.csv_out = dir.file("a.csv");
    config.deg_cap = 2;
    REQUIRE(cli::cmd_invariants(config) == cli::kExitOk);
    const auto a_json = read_file(config.out);
    const auto a_csv = read_file(config.csv_out);
    config.out = dir.file("b.json");
    config.csv_out = dir.file("b.csv");
    REQUIRE(cli::cmd_invariants(config) == cli::kExitOk);
    CHECK(read_file(config.out) == a_json);
    CHECK(read_file(config.csv_out) == a_csv);
}

TEST_SUITE_END();
