#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bosegrid/advisor.hpp"
#include "bosegrid/datasets.hpp"

namespace fs = std::filesystem;
using bosegrid::datasets::Dataset;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

fs::path scratch() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("bosegrid_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Run run(const std::string& args) {
    const char* exe = std::getenv("BOSEGRID_CLI");
    REQUIRE_MESSAGE(exe != nullptr, "BOSEGRID_CLI is not set");
    const fs::path o = scratch() / "stdout.txt", e = scratch() / "stderr.txt";
    const std::string cmd = std::string(exe) + " " + args + " > " + o.string() + " 2> " + e.string();
    const int st = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    r.out = slurp(o);
    r.err = slurp(e);
    return r;
}

size_t column(const Dataset& d, const std::string& name) {
    for (size_t i = 0; i < d.columns.size(); ++i)
        if (d.columns[i] == name) return i;
    FAIL("missing column " << name);
    return 0;
}

}  // namespace

TEST_CASE("table1 in both formats") {
    const Run csv = run("table1 --n-phi 32,64");
    REQUIRE(csv.code == 0);
    const Dataset d = bosegrid::datasets::from_csv(csv.out);
    CHECK(d.command == "table1");
    REQUIRE(d.rows.size() == 2);
    CHECK(d.rows[1][column(d, "n_phi")] == 64);
    CHECK(d.rows[1][column(d, "n_b")] == 27);
    CHECK(d.rows[1][column(d, "delta_e_over_m0")] == doctest::Approx(89.396).epsilon(1e-5));

    const Run js = run("table1 --n-phi 32,64 --format json");
    REQUIRE(js.code == 0);
    const Dataset dj = bosegrid::datasets::from_json(nlohmann::json::parse(js.out));
    CHECK(dj.rows == d.rows);
    CHECK(dj.columns == d.columns);
    // Global flags may also come first.
    CHECK(run("--format json table1 --n-phi 32,64").out == js.out);
}

TEST_CASE("output file and reruns are byte-identical") {
    const fs::path a = scratch() / "a.csv", b = scratch() / "b.csv";
    REQUIRE(run("squeeze --ratio 2,4 --eps 1e-4,1e-6 --out " + a.string()).code == 0);
    REQUIRE(run("squeeze --ratio 2,4 --eps 1e-4,1e-6 --out " + b.string()).code == 0);
    CHECK(slurp(a) == slurp(b));
    const Dataset d = bosegrid::datasets::from_csv(slurp(a));
    CHECK(d.rows.size() == 4);
    CHECK(d.summary.contains("fit_b"));
    // Round trip through the writer.
    CHECK(bosegrid::datasets::to_csv(d) == slurp(a));
}

TEST_CASE("errors keeps non-finite entries") {
    const Run r = run("errors --n-phi 16 --format json");
    REQUIRE(r.code == 0);
    const Dataset d = bosegrid::datasets::from_json(nlohmann::json::parse(r.out));
    const size_t c = column(d, "tail_est");
    bool saw_nan = false;
    for (const auto& row : d.rows) saw_nan |= std::isnan(row[c]);
    CHECK(saw_nan);
    const Run rc = run("errors --n-phi 16");
    REQUIRE(rc.code == 0);
    const Dataset dc = bosegrid::datasets::from_csv(rc.out);
    REQUIRE(dc.rows.size() == d.rows.size());
    for (size_t i = 0; i < d.rows.size(); ++i)
        for (size_t j = 0; j < d.columns.size(); ++j) {
            if (std::isnan(d.rows[i][j])) CHECK(std::isnan(dc.rows[i][j]));
            else CHECK(dc.rows[i][j] == d.rows[i][j]);
        }
}

TEST_CASE("qpe-demo on an eigenstate") {
    const Run r = run("qpe-demo --state eigen:5");
    REQUIRE(r.code == 0);
    const Dataset d = bosegrid::datasets::from_csv(r.out);
    REQUIRE(d.rows.size() == 128);
    CHECK(d.rows[5][column(d, "p")] > 1.0 - 1e-6);
    CHECK(d.summary.at("bounds_hold").get<bool>());

    // Shots need a seed; with one the run is reproducible.
    CHECK(run("qpe-demo --state eigen:5 --shots 1000").code == 2);
    const Run s1 = run("qpe-demo --state random --shots 1000 --seed 7");
    const Run s2 = run("qpe-demo --state random --shots 1000 --seed 7");
    REQUIRE(s1.code == 0);
    CHECK(s1.out == s2.out);
}

TEST_CASE("model scans") {
    const Run r = run("aho --mass 4,5,6 --eps 1e-5 --sample-eps 1e-4 --n-cut 32 --format json");
    REQUIRE(r.code == 0);
    const Dataset d = bosegrid::datasets::from_json(nlohmann::json::parse(r.out));
    CHECK(d.rows.size() == 3);
    CHECK(d.summary.contains("optimum"));
    CHECK(d.summary.contains("sampling"));
}

TEST_CASE("counterexample spectra") {
    const Run r = run("counterexample --n-max 40");
    REQUIRE(r.code == 0);
    const Dataset d = bosegrid::datasets::from_csv(r.out);
    CHECK(d.rows.size() == 41);
    CHECK(d.summary.at("envelope_slope").get<double>() == doctest::Approx(-8.0).epsilon(0.02));
}

TEST_CASE("advise with a backend and with a histogram file") {
    const Run r = run("advise --backend harmonic:3 --format json");
    REQUIRE(r.code == 0);
    const nlohmann::json j = nlohmann::json::parse(r.out);
    REQUIRE(j.contains("transcript"));
    CHECK(j["transcript"]["converged"].get<bool>());
    CHECK(bosegrid::advisor::replay_transcript(j["transcript"]));

    // One measured histogram: the vacuum of mass 3 on a mass-1 grid.
    auto b = bosegrid::advisor::harmonic_backend(3.0);
    bosegrid::advisor::GuidelineState st;
    const auto snap = b->measure(st, false);
    const fs::path in = scratch() / "hist.json";
    std::ofstream(in) << bosegrid::advisor::snapshot_to_json(snap, st).dump();
    const Run ri = run("advise --input " + in.string() + " --format json");
    REQUIRE(ri.code == 0);
    const nlohmann::json ji = nlohmann::json::parse(ri.out);
    CHECK(ji["transcript"]["rounds"][0]["action"]["kind"] == "RescaleMass");

    std::ofstream(scratch() / "bad.json") << "{\"grid\": {\"n_phi\": 64}}";
    CHECK(run("advise --input " + (scratch() / "bad.json").string()).code == 2);
    std::ofstream(scratch() / "junk.json") << "not json";
    CHECK(run("advise --input " + (scratch() / "junk.json").string()).code == 2);
    CHECK(run("advise --backend nosuch").code == 2);
    CHECK(run("advise --backend harmonic:3 --shots 100").code == 2);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run("").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("table1 --n-phi 33").code == 2);
    CHECK(run("table1 --n-phi 512").code == 2);
    CHECK(run("table1 --format xml").code == 2);
    CHECK(run("qpe-demo --n-r 3").code == 2);
    CHECK(run("--help").code == 0);
}
