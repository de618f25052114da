#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "eotf/cli/commands.hpp"
#include "eotf/cli/manifest.hpp"
#include "eotf/cli/scale_study.hpp"
#include "eotf/common/files.hpp"
#include "eotf/evalbench/statistics.hpp"

using namespace eotf;
using namespace eotf::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run eotf_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

// Fresh scratch directory per test case.
fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("eotf_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string transcript(std::size_t n) {
    Json arr = Json::array();
    for (std::size_t i = 0; i < n; ++i) {
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "```python\ndef problem(x):\n    return %.2f * x[0] ** 2 + x[1] ** 2 + %.2f * sin(x[0] * %zu)\n```",
                      0.1 * static_cast<double>(i + 1), 0.05 * static_cast<double>(i), i % 5 + 1);
        arr.push_back(buf);
    }
    return arr.dump();
}

// bounds + sphere target at dim 2 in `dir`
void prepare(const fs::path& dir, std::size_t dim = 2) {
    const std::string d = std::to_string(dim);
    REQUIRE(eotf_cli({"bounds", "--dim", d, "--seeds", "2", "--workers", "1", "--out", (dir / "bounds.json").string()}).code == 0);
    REQUIRE(eotf_cli({"target", "--id", "sphere", "--dim", d, "--seeds", "3", "--bounds", (dir / "bounds.json").string(),
                      "--out", (dir / "target.json").string()})
                .code == 0);
    write_text_file(dir / "t.json", transcript(40));
}

std::vector<std::string> evolve_args(const fs::path& dir, const std::string& out) {
    return {"evolve", "--method", "eotf", "--budget", "30", "--dim", "2", "--target", (dir / "target.json").string(),
            "--bounds", (dir / "bounds.json").string(), "--provider", "mock", "--transcript", (dir / "t.json").string(),
            "--seed", "7", "--workers", "1", "--no-timestamps", "--out", (dir / out).string()};
}

}  // namespace

TEST_CASE("usage errors exit 1") {
    CHECK(eotf_cli({}).code == kExitUsage);
    CHECK(eotf_cli({"frobnicate"}).code == kExitUsage);
    CHECK(eotf_cli({"bounds", "--no-such-flag"}).code == kExitUsage);
    const auto r = eotf_cli({"bounds"});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("--out is required") != std::string::npos);
    CHECK(eotf_cli({"--help"}).code == kExitOk);
    CHECK(eotf_cli({"--version"}).out.find(kVersion) != std::string::npos);
}

TEST_CASE("validate reports diagnostics and exits 2") {
    const auto dir = scratch("validate");
    write_text_file(dir / "bad.fn", "def problem(x):\n    while True:\n        pass\n    return x[0]\n");
    auto r = eotf_cli({"validate", (dir / "bad.fn").string()});
    CHECK(r.code == kExitRuntime);
    CHECK(r.err.find("bad.fn:2:") != std::string::npos);
    CHECK(r.err.find("error:") != std::string::npos);

    write_text_file(dir / "ok.fn", "def problem(x):\n    return sum(x ** 2)\n");
    r = eotf_cli({"validate", (dir / "ok.fn").string()});
    CHECK(r.code == kExitOk);
    CHECK(r.out.rfind("ok ", 0) == 0);

    CHECK(eotf_cli({"validate", (dir / "missing.fn").string()}).code == kExitRuntime);
}

TEST_CASE("export renders both dialects") {
    const auto dir = scratch("export");
    write_text_file(dir / "f.fn", "def problem(x):\n    return np.sum(x ** 2)\n");
    auto r = eotf_cli({"export", (dir / "f.fn").string(), "--dialect", "dsl"});
    CHECK(r.code == 0);
    CHECK(r.out.find("np.") == std::string::npos);
    r = eotf_cli({"export", (dir / "f.fn").string()});
    CHECK(r.out.find("import numpy as np") != std::string::npos);
    CHECK(eotf_cli({"export", (dir / "f.fn").string(), "--dialect", "latex"}).code == kExitUsage);
}

TEST_CASE("evolve populates a run directory and reruns byte-identically") {
    const auto dir = scratch("evolve");
    prepare(dir);
    auto r = eotf_cli(evolve_args(dir, "a"));
    REQUIRE(r.code == 0);
    REQUIRE(eotf_cli(evolve_args(dir, "b")).code == 0);
    for (const char* f : {"log.jsonl", "trajectory.csv", "target.json", "bounds.json", "best.fn"})
        CHECK(read_text_file(dir / "a" / f) == read_text_file(dir / "b" / f));
    for (std::size_t q = 1; q <= 30; ++q) {
        const auto name = std::to_string(q) + ".meta.json";
        CHECK(read_text_file(dir / "a" / "candidates" / name) == read_text_file(dir / "b" / "candidates" / name));
    }

    const Json m = Json::parse(read_text_file(dir / "a" / "manifest.json"));
    CHECK(m["subcommand"] == "evolve");
    CHECK(m["status"] == "ok");
    CHECK(m["config_hash"] == config_hash(m["config"]));
    CHECK(m["config"] == Json::parse(read_text_file(dir / "a" / "config.json")));
    CHECK(m["inputs"].size() == 3);
    CHECK_FALSE(m["finished_at"].get<std::string>().empty());
}

TEST_CASE("replaying a manifest reproduces the run") {
    const auto dir = scratch("replay");
    prepare(dir);
    REQUIRE(eotf_cli(evolve_args(dir, "a")).code == 0);
    REQUIRE(eotf_cli({"evolve", "--config", (dir / "a" / "manifest.json").string(), "--out", (dir / "b").string()}).code == 0);
    CHECK(read_text_file(dir / "a" / "log.jsonl") == read_text_file(dir / "b" / "log.jsonl"));
    CHECK(read_text_file(dir / "a" / "trajectory.csv") == read_text_file(dir / "b" / "trajectory.csv"));
}

TEST_CASE("flags override the config file, which overrides defaults") {
    const auto dir = scratch("precedence");
    prepare(dir);
    write_text_file(dir / "cfg.json", R"({"budget": 22, "population": 20, "seed": 3})");
    auto args = evolve_args(dir, "run");
    // drop --budget 30 so the config value applies
    args.erase(args.begin() + 3, args.begin() + 5);
    args.push_back("--config");
    args.push_back((dir / "cfg.json").string());
    *(std::find(args.begin(), args.end(), "--seed") + 1) = "9";
    REQUIRE(eotf_cli(args).code == 0);
    const Json c = Json::parse(read_text_file(dir / "run" / "config.json"));
    CHECK(c["budget"] == 22);
    CHECK(c["seed"] == 9);
    CHECK(c["parents"] == 5);
    CHECK(c["http"]["max_tokens"] == 2048);
    CHECK(c.dump().find("api_key\"") == std::string::npos);

    write_text_file(dir / "typo.json", R"({"budgte": 22})");
    args.push_back("--config");
    args.push_back((dir / "typo.json").string());
    CHECK(eotf_cli(args).code == kExitUsage);
}

TEST_CASE("evolve runtime failures exit 2") {
    const auto dir = scratch("evolve_fail");
    prepare(dir);
    write_text_file(dir / "t.json", transcript(5));
    auto r = eotf_cli(evolve_args(dir, "short"));
    CHECK(r.code == kExitRuntime);
    CHECK(Json::parse(read_text_file(dir / "short" / "manifest.json"))["status"] == "failed");

    auto args = evolve_args(dir, "dim");
    args[6] = "3";
    CHECK(eotf_cli(args).code == kExitRuntime);
}

TEST_CASE("resample writes one row per draw") {
    const auto dir = scratch("resample");
    prepare(dir);
    REQUIRE(eotf_cli(evolve_args(dir, "run")).code == 0);
    const auto r = eotf_cli({"resample", "--run", (dir / "run").string(), "--count", "100", "--workers", "2",
                             "--out", (dir / "res.csv").string()});
    REQUIRE(r.code == 0);
    const std::string csv = read_text_file(dir / "res.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 101);
    const Json s = Json::parse(r.out);
    CHECK(s["invalid_count"] == 0);
    CHECK(s["robust"] == true);

    // seeds overlapping the run's search seed are refused
    CHECK(eotf_cli({"resample", "--run", (dir / "run").string(), "--seed", "0", "--count", "5", "--out",
                    (dir / "x.csv").string()})
              .code == kExitRuntime);
}

TEST_CASE("winmatrix, rank and grid") {
    const auto dir = scratch("bench");
    std::string med = "method,problem,median\n";
    for (int p = 1; p <= 24; ++p) {
        med += "A,f" + std::to_string(p) + "," + (p <= 18 ? "0.1" : "0.5") + "\n";
        med += "B,f" + std::to_string(p) + ",0.3\n";
    }
    write_text_file(dir / "med.csv", med);
    auto r = eotf_cli({"winmatrix", "--medians", (dir / "med.csv").string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("A,B,18,0,6,24,75.0") != std::string::npos);

    r = eotf_cli({"rank", "--dim", "2", "--budget-multiplier", "10", "--repetitions", "2", "--workers", "1", "--out",
                  (dir / "ranks.csv").string()});
    CHECK(r.code == 0);
    r = eotf_cli({"rank", "--dim", "2", "--budget-multiplier", "10", "--repetitions", "2", "--workers", "3", "--out",
                  (dir / "ranks3.csv").string(), "--compare", (dir / "ranks.csv").string()});
    CHECK(r.code == 0);
    CHECK(read_text_file(dir / "ranks.csv") == read_text_file(dir / "ranks3.csv"));
    CHECK(r.out.find("spearman 1") != std::string::npos);
    CHECK(eotf_cli({"rank", "--optimizers", "de,cmaes"}).code == kExitUsage);

    r = eotf_cli({"grid", "--id", "sphere", "--resolution", "3", "--out", "-"});
    CHECK(r.code == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 10);
    CHECK(eotf_cli({"grid", "--id", "sphere", "--fn", "x.fn"}).code == kExitUsage);
}

TEST_CASE("scale study aggregates resampled medians per dimension") {
    const auto dir = scratch("scale");
    for (std::size_t d : {2, 3}) {
        const auto base = dir / "in" / ("d" + std::to_string(d));
        fs::create_directories(base / "targets");
        REQUIRE(eotf_cli({"bounds", "--dim", std::to_string(d), "--seeds", "2", "--workers", "1", "--out",
                          (base / "bounds.json").string()})
                    .code == 0);
        for (const char* p : {"sphere", "classic/2"}) {
            std::string stem = p;
            std::replace(stem.begin(), stem.end(), '/', '_');
            REQUIRE(eotf_cli({"target", "--id", p, "--dim", std::to_string(d), "--seeds", "3", "--bounds",
                              (base / "bounds.json").string(), "--out", (base / "targets" / (stem + ".json")).string()})
                        .code == 0);
        }
    }
    write_text_file(dir / "t.json", transcript(40));
    auto args = [&](const std::string& out, const std::string& dims) {
        return std::vector<std::string>{"scale", "--dims", dims, "--inputs", (dir / "in").string(), "--transcript",
                                        (dir / "t.json").string(), "--budget", "25", "--count", "8", "--workers", "1",
                                        "--no-timestamps", "--out", (dir / out).string()};
    };
    REQUIRE(eotf_cli(args("s1", "2,3")).code == 0);
    REQUIRE(eotf_cli(args("s2", "2,3")).code == 0);
    const std::string summary = read_text_file(dir / "s1" / "scale.csv");
    CHECK(summary == read_text_file(dir / "s2" / "scale.csv"));
    CHECK(std::count(summary.begin(), summary.end(), '\n') == 3);

    // avg_median is the mean of the per-problem medians
    std::istringstream detail(read_text_file(dir / "s1" / "scale_detail.csv"));
    std::string line;
    std::getline(detail, line);
    double sum2 = 0;
    int n2 = 0;
    while (std::getline(detail, line)) {
        if (line.rfind("2,", 0) != 0) continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
        sum2 += std::stod(cols[3]);
        ++n2;
    }
    REQUIRE(n2 == 2);
    std::istringstream sm(summary);
    std::getline(sm, line);
    std::getline(sm, line);
    CHECK(std::stod(line.substr(2)) == doctest::Approx(sum2 / 2).epsilon(1e-12));

    CHECK(eotf_cli(args("s3", "2,4")).code == kExitRuntime);
}
