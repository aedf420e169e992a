#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "wpl/manifest.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(const std::vector<std::string>& args, const wpl::cli::Hooks& hooks = {}) {
    std::ostringstream out, err;
    const int code = wpl::cli::run_cli(args, out, err, hooks);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& f) const { return (path / f).string(); }
};

std::string slurp(const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("moments uniform k=6 n=500") {
        const auto r = run({"moments", "--model", "uniform", "--k", "6", "--n", "500"});
        REQUIRE(r.code == 0);
        const auto j = json::parse(r.out);
        CHECK(j["var_P"]["exact"] == "389501/324");
        CHECK(j["mu3_dominant"]["exact"] == "1144000/729");
        CHECK(j["mu3_dominant"]["decimal"].get<std::string>().rfind("1569.27297668", 0) == 0);
    }

    TEST_CASE("moments trivial and geometric") {
        auto j = json::parse(run({"moments", "--model", "uniform", "--k", "1", "--n", "10"}).out);
        CHECK(j["mean_P"]["exact"] == "22");
        CHECK(j["var_P"]["exact"] == "0");
        j = json::parse(run({"moments", "--model", "geometric", "--p", "1/2", "--n", "2"}).out);
        CHECK(j["mean_P"]["exact"] == "28/3");
        const auto csv = run({"moments", "--model", "uniform", "--k", "3", "--n", "4", "--format", "csv"});
        CHECK(csv.out.find("mean_P,44/3,14.6666666666667\n") != std::string::npos);
    }

    TEST_CASE("usage errors exit 2") {
        CHECK(run({}).code == 2);
        CHECK(run({"moments", "--model", "uniform", "--n", "5"}).code == 2);
        CHECK(run({"moments", "--model", "uniform", "--k", "0", "--n", "5"}).code == 2);
        CHECK(run({"moments", "--model", "geometric", "--p", "3/2", "--n", "5"}).code == 2);
        CHECK(run({"moments", "--model", "poisson", "--k", "3", "--n", "5"}).code == 2);
        CHECK(run({"moments", "--model", "uniform", "--k", "3", "--n", "1"}).code == 2);
        CHECK(run({"xmoment", "--model", "uniform", "--k", "3", "--index", "0,9"}).code == 2);
        CHECK(run({"frobnicate"}).code == 2);
        CHECK(run({"--help"}).code == 0);
    }

    TEST_CASE("xmoment") {
        const auto r = run({"xmoment", "--model", "uniform", "--k", "6", "--index", "0,1,1"});
        REQUIRE(r.code == 0);
        const auto j = json::parse(r.out);
        CHECK(j["closed"]["exact"] == "427/108");
        CHECK(j["oracle"]["exact"] == "427/108");
        const auto g = json::parse(run({"xmoment", "--model", "geometric", "--p", "1/2", "--index", "1,1"}).out);
        CHECK(g["closed"]["exact"] == "34/9");
        CHECK(g["oracle"]["cutoff"] == 50);
        CHECK(run({"xmoment", "--model", "uniform", "--k", "6", "--index", "0,1,0,1", "--method", "closed"}).code == 2);
    }

    TEST_CASE("verify") {
        const auto r = run({"verify", "--k-max", "4", "--n-max", "8", "--p-list", "1/2"});
        CHECK(r.code == 0);
        CHECK(r.out.find("verify: all") != std::string::npos);
        wpl::cli::Hooks hooks;
        hooks.closed_form = [](const wpl::ModelSpec& m, const wpl::MultiIndex& idx, bool centered) {
            wpl::ExactScalar v = wpl::cross_moment_closed(m, idx, centered);
            return idx == wpl::MultiIndex(0, 2, 0, 0) && !centered ? wpl::ExactScalar(v + 1) : v;
        };
        const auto bad = run({"verify", "--k-max", "3", "--n-max", "4", "--p-list", "1/2"}, hooks);
        CHECK(bad.code == 1);
        CHECK(bad.out.find("FAIL  cross_moment.closed_vs_oracle.uniform") != std::string::npos);
        CHECK(bad.out.find("T_{0,2,0,0}") != std::string::npos);
    }

    TEST_CASE("simulate prints statistics and is reproducible") {
        TempDir dir("wpl_cli_sim");
        const std::vector<std::string> a{"simulate", "--model", "uniform", "--k", "6", "--m", "500",
                                         "--trajectories", "500", "--seed", "1", "--paths", "--out", dir / "a.csv"};
        const auto r = run(a);
        REQUIRE(r.code == 0);
        CHECK(r.out.find("1144000/729 = 1569.272976680384") != std::string::npos);
        const auto first = slurp(dir / "a.csv");
        const auto first_paths = slurp(dir / "a.paths.csv");
        const auto manifest = json::parse(slurp(dir / "a.csv.manifest.json"));
        CHECK(manifest["outputs"].size() == 2);
        CHECK(manifest["outputs"][0]["sha256"] == wpl::sha256_hex(first));
        CHECK(manifest["config"]["seed"] == 1);
        REQUIRE(run(a).code == 0);
        CHECK(slurp(dir / "a.csv") == first);
        CHECK(slurp(dir / "a.paths.csv") == first_paths);
        CHECK(json::parse(slurp(dir / "a.csv.manifest.json")) == manifest);
    }

    TEST_CASE("simulate with one gap") {
        TempDir dir("wpl_cli_one");
        REQUIRE(run({"simulate", "--model", "uniform", "--k", "6", "--m", "1", "--trajectories", "1", "--seed", "7",
                     "--paths", "--out", dir / "one.csv"})
                    .code == 0);
        std::istringstream ends(slurp(dir / "one.csv"));
        std::string header, row;
        std::getline(ends, header);
        std::getline(ends, row);
        const auto paths = slurp(dir / "one.paths.csv");
        const auto endpoint = row.substr(2, row.find(',', 2) - 2);
        CHECK(paths.find("0,1," + endpoint + "\n") != std::string::npos);
    }

    TEST_CASE("memory budget and I/O errors exit 1") {
        TempDir dir("wpl_cli_err");
        CHECK(run({"simulate", "--model", "uniform", "--k", "6", "--m", "500", "--trajectories", "100000", "--paths",
                   "--memory-budget-mib", "1", "--out", dir / "x.csv"})
                  .code == 1);
        CHECK(run({"simulate", "--model", "uniform", "--k", "6", "--m", "5", "--trajectories", "5", "--out",
                   dir / "nope/x.csv"})
                  .code == 1);
        CHECK(run({"histogram", "--input", dir / "missing.csv", "--out", dir / "h.csv"}).code == 1);
    }

    TEST_CASE("histogram and plots") {
        TempDir dir("wpl_cli_hist");
        REQUIRE(run({"simulate", "--model", "uniform", "--k", "6", "--m", "100", "--trajectories", "300", "--seed",
                     "4", "--paths", "--out", dir / "e.csv"})
                    .code == 0);
        const std::vector<std::string> h{"histogram", "--input", dir / "e.csv", "--out", dir / "h.csv"};
        REQUIRE(run(h).code == 0);
        const auto first = slurp(dir / "h.csv");
        CHECK(first.rfind("i,left,right,center,count,freq,gauss_mass\n", 0) == 0);
        REQUIRE(run(h).code == 0);
        CHECK(slurp(dir / "h.csv") == first);
        CHECK(json::parse(slurp(dir / "h.csv.manifest.json"))["outputs"][0]["sha256"] == wpl::sha256_hex(first));

        CHECK(run({"histogram", "--input", dir / "e.paths.csv", "--out", dir / "h2.csv"}).code == 1);
        CHECK(run({"histogram", "--input", dir / "e.csv", "--delta", "0.7", "--out", dir / "h2.csv"}).code == 2);

        for (const std::string kind : {"histogram", "cumulative"}) {
            CHECK(run({"plot", "--kind", kind, "--input", dir / "e.csv", "--out", dir / (kind + ".svg")}).code == 0);
        }
        for (const std::string kind : {"trajectory", "normalized"}) {
            CHECK(run({"plot", "--kind", kind, "--input", dir / "e.paths.csv", "--model", "uniform", "--k", "6",
                       "--trajectory", "3", "--out", dir / (kind + ".svg")})
                      .code == 0);
        }
        CHECK(run({"plot", "--kind", "pmf", "--model", "geometric", "--p", "1/2", "--out", dir / "pmf.svg"}).code == 0);
        CHECK(slurp(dir / "pmf.svg").find("</svg>") != std::string::npos);
        CHECK(run({"plot", "--kind", "trajectory", "--input", dir / "e.csv", "--model", "uniform", "--k", "6", "--out",
                   dir / "bad.svg"})
                  .code == 1);
        CHECK(run({"plot", "--kind", "histogram", "--out", dir / "bad.svg"}).code == 2);
    }

    TEST_CASE("render") {
        const auto r = run({"render", "--word", "2,3,1,3"});
        REQUIRE(r.code == 0);
        CHECK(r.out.find("perimeter 18") != std::string::npos);
        CHECK(run({"render", "--word", "2,0"}).code == 2);
        CHECK(run({"render", "--word", "20000"}).code == 2);
    }
}
