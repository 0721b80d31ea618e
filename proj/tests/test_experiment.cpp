#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dwalk/error.hpp"
#include "dwalk/experiment.hpp"
#include "dwalk/format.hpp"
#include "dwalk/rng.hpp"

using namespace dwalk;

namespace {
std::string error_of(const std::string& text) {
    try {
        parse_spec(text);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}
bool has(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }
} // namespace

TEST_SUITE("experiment") {

TEST_CASE("minimal spec gets defaults") {
    const auto s = parse_spec("kind = pi-convergence\ngrid = 500:3\n");
    CHECK(s.kind == ExperimentKind::pi_convergence);
    REQUIRE(s.grid.size() == 1);
    CHECK(s.grid[0].n == 500);
    CHECK(s.grid[0].d == 3.0);
    CHECK(s.runs_per_point == 1);
    CHECK(s.epsilon == 0.1);
    CHECK(s.stationary_tol == 1e-12);
    CHECK_FALSE(s.mix_threshold.has_value());
    CHECK(has(s.canonical(), "epsilon=0.1\n"));
    CHECK(has(s.canonical(), "mix_threshold=auto\n"));
    // canonical text parses back to the same canonical text
    CHECK(parse_spec(s.canonical()).canonical() == s.canonical());
}

TEST_CASE("grid forms") {
    const auto s = parse_spec("kind=cover-convergence\ngrid=500:3, 1000:ln # comment\nruns=4\n");
    REQUIRE(s.grid.size() == 2);
    CHECK(s.grid[1].d_is_log_n);
    CHECK(s.grid[1].effective_d() == doctest::Approx(std::log(1000.0)));
    CHECK(s.grid[1].p() * 1000 == doctest::Approx(std::pow(std::log(1000.0), 2)));
    const auto c = parse_spec("kind=connectivity-threshold\ngrid=5000\n");
    CHECK(c.grid[0].n == 5000);
}

TEST_CASE("spec diagnostics name line and key") {
    CHECK(has(error_of("kind=pi-convergence\ngrid=\n"), "grid"));
    const auto dup = error_of("kind=pi-convergence\nruns=2\ngrid=500:3\nruns=3\n");
    CHECK(has(dup, "line 4"));
    CHECK(has(dup, "line 2"));
    CHECK(has(dup, "'runs'"));
    const auto unk = error_of("kind=pi-convergence\ngrid=500:3\ncolour=red\n");
    CHECK(has(unk, "line 3"));
    CHECK(has(unk, "colour"));
    const auto d1 = error_of("kind=cover-convergence\ngrid=500:1\n");
    CHECK(has(d1, "line 2"));
    CHECK(has(d1, "d must exceed 1"));
    CHECK(has(error_of("grid=500:3\n"), "kind"));
    CHECK(has(error_of("kind=pi-convergence\ngrid=500:3\nruns=0\n"), "runs"));
    CHECK(has(error_of("kind=pi-convergence\ngrid=500:3\neta=0.5\n"), "eta"));
    CHECK(has(error_of("kind=bogus\ngrid=500:3\n"), "line 1"));
    CHECK(has(error_of("kind=pi-convergence\ngrid=500:3\nruns=x\n"), "line 3"));
    CHECK(has(error_of("kind=pi-convergence\ngrid=500\n"), "grid"));
    ExperimentSpec empty;
    CHECK_THROWS_AS(validate(empty), ValidationError);
}

TEST_CASE("seed derivation is fixed") {
    auto s = parse_spec("kind=pi-convergence\ngrid=100:3,200:3\nruns=3\nmaster_seed=42\n");
    CHECK(run_seed(s, 1, 2) == derive_seed(42, 1, 2));
    CHECK(derive_seed(42, 1, 2) == mix64(mix64(mix64(42) ^ 1) + 2));
    CHECK(run_seed(s, 0, 1) != run_seed(s, 1, 0));
}

TEST_CASE("runs are reproducible and rerunnable") {
    const auto spec = parse_spec("kind=pi-convergence\ngrid=100:3,150:3\nruns=3\nmaster_seed=7\n");
    const auto a = run_experiment(spec);
    const auto b = run_experiment(spec);
    CHECK(a.runs_csv() == b.runs_csv());
    CHECK(a.points_csv() == b.points_csv());
    CHECK(a.rows.size() == 6);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].point_index == i / 3);
        CHECK(a.rows[i].run_index == i % 3);
        CHECK(csv_line(run_single(spec, i / 3, i % 3)) == csv_line(a.rows[i]));
    }
    CHECK(has(a.sidecar_json(), a.spec_hash));
    CHECK(a.spec_hash == fnv1a_hex(spec.canonical()));
    CHECK(a.points[0].runs_ok + a.points[0].runs_failed == 3);
}

TEST_CASE("failing runs are recorded, not fatal") {
    // np = 1.2 ln n at n = 40 is usually not strongly connected
    const auto spec = parse_spec("kind=mixing-scan\ngrid=40:1.2\nruns=6\n");
    const auto r = run_experiment(spec);
    std::size_t errors = 0;
    for (const auto& row : r.rows) {
        if (row.status != "ok") {
            ++errors;
            CHECK(has(row.status, "error: "));
            CHECK(std::isnan(row.values[0]));
        }
    }
    CHECK(errors == r.points[0].runs_failed);
    CHECK(errors > 0);
}

TEST_CASE("all kinds run on a tiny grid") {
    for (const char* kind : {"cover-convergence", "mixing-scan", "z-ratio", "contraction", "connectivity-threshold"}) {
        const auto spec = parse_spec(std::string("kind=") + kind + "\ngrid=200:4\nruns=2\npairs=3\n");
        const auto r = run_experiment(spec);
        CHECK(r.columns == experiment_columns(spec.kind));
        for (const auto& row : r.rows) {
            INFO(kind << ": " << row.status);
            CHECK(row.status == "ok");
            CHECK(row.values.size() == r.columns.size());
        }
    }
    const auto up = parse_spec("kind=z-ratio\ngrid=2000:3\nz_mode=up\npairs=2\n");
    const auto r = run_experiment(up);
    CHECK(r.rows[0].status == "ok");
    CHECK(r.value(r.rows[0], "violations") == 0.0);
}

TEST_CASE("output files") {
    const auto dir = std::filesystem::temp_directory_path() / "dwalk_exp_test";
    std::filesystem::create_directories(dir);
    auto spec = parse_spec("kind=connectivity-threshold\ngrid=300\nruns=2\n");
    spec.output = (dir / "sweep").string();
    const auto r = run_experiment(spec);
    r.write_files();
    for (const char* ext : {".csv", ".points.csv", ".json"}) CHECK(std::filesystem::exists(spec.output + ext));
    std::ifstream in(spec.output + ".csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "point_index,run_index,seed,n,d,status,np_low,np_high,connected_low,connected_high");
    std::filesystem::remove_all(dir);
}

TEST_CASE("number formatting") {
    CHECK(format_real(0.1) == "0.1");
    CHECK(format_real(1.0 / 3.0) == "0.333333333333");
    CHECK(format_real(INFINITY) == "inf");
    CHECK(format_real(-INFINITY) == "-inf");
    CHECK(format_real(NAN) == "nan");
    CHECK(format_real(1e-20) == "1e-20");
    CHECK(format_real(123456789012345.0) == "1.23456789012e+14");
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

}
