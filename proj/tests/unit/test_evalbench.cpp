#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "eotf/common/rng.hpp"
#include "eotf/dsl/typed_program.hpp"
#include "eotf/evalbench/grid.hpp"
#include "eotf/evalbench/optimizers.hpp"
#include "eotf/evalbench/ranking.hpp"
#include "eotf/evalbench/resample.hpp"
#include "eotf/evalbench/statistics.hpp"
#include "eotf/evalbench/win_matrix.hpp"
#include "eotf/targets/bounds.hpp"
#include "eotf/targets/target_spec.hpp"
#include "support/fixtures.hpp"

using namespace eotf;
using namespace eotf::evalbench;

namespace {

// rank = 1 + (# strictly smaller) + (# equal others) / 2
std::vector<double> ranks_oracle(const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        double less = 0, eq = 0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (v[j] < v[i]) ++less;
            if (j != i && v[j] == v[i]) ++eq;
        }
        r[i] = 1 + less + eq / 2;
    }
    return r;
}

// Rank-sum form: 12/(N k (k+1)) sum S_j^2 - 3N(k+1).
double friedman_oracle(const std::vector<std::vector<double>>& ranks) {
    const double n = static_cast<double>(ranks.size()), k = static_cast<double>(ranks[0].size());
    double ss = 0;
    for (std::size_t j = 0; j < ranks[0].size(); ++j) {
        double s = 0;
        for (const auto& row : ranks) s += row[j];
        ss += s * s;
    }
    return 12.0 / (n * k * (k + 1)) * ss - 3 * n * (k + 1);
}

double sphere(std::span<const double> x) {
    double s = 0;
    for (double v : x) s += v * v;
    return s;
}

const ela::Bounds& bounds2() {
    static const ela::Bounds b = [] {
        targets::BoundsOptions o;
        o.seeds_per_problem = 2;
        return targets::compute_bounds("classic", targets::classic_suite(2), 2, o);
    }();
    return b;
}

const ela::NormalizedVector& sphere_target() {
    static const ela::NormalizedVector t = [] {
        targets::TargetSpec s;
        s.id = "sphere";
        s.seeds = {0};
        return targets::compute_target_vector(s, bounds2());
    }();
    return t;
}

}  // namespace

TEST_CASE("quantiles interpolate between order statistics") {
    const std::vector<double> d{0.3, 0.1, 0.2};
    CHECK(median(d) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(quantile(d, 0.25) == doctest::Approx(0.15).epsilon(1e-15));
    CHECK(quantile(d, 0.75) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(median(std::vector<double>{1, 2, 3, 4}) == 2.5);
    CHECK(quantile(std::vector<double>{7}, 0.3) == 7);
    CHECK_THROWS(median(std::vector<double>{}));
    CHECK_THROWS(quantile(d, 1.5));
}

TEST_CASE("quantile is monotone in the level and spans the sample range") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v(1 + rng.below(20));
        for (auto& x : v) x = rng.uniform(-3, 3);
        CHECK(quantile(v, 0.0) == *std::min_element(v.begin(), v.end()));
        CHECK(quantile(v, 1.0) == *std::max_element(v.begin(), v.end()));
        double prev = -INFINITY;
        for (double q = 0; q <= 1.0; q += 0.05) {
            const double cur = quantile(v, q);
            CHECK(cur >= prev);
            prev = cur;
        }
    }
}

TEST_CASE("average ranks agree with the counting oracle and sum to k(k+1)/2") {
    Rng rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> v(1 + rng.below(9));
        for (auto& x : v) x = static_cast<double>(rng.below(4));  // plenty of ties
        const auto r = average_ranks(v);
        CHECK(r == ranks_oracle(v));
        const double k = static_cast<double>(v.size());
        CHECK(std::accumulate(r.begin(), r.end(), 0.0) == doctest::Approx(k * (k + 1) / 2));
    }
}

TEST_CASE("friedman statistic") {
    CHECK(friedman_statistic(std::vector<double>{1, 2}, 2) == doctest::Approx(2.0));
    CHECK(friedman_statistic(std::vector<double>{2, 2, 2}, 10) == doctest::Approx(0.0));

    Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.below(10), k = 2 + rng.below(5);
        std::vector<std::vector<double>> ranks;
        std::vector<double> mean(k, 0.0);
        for (std::size_t p = 0; p < n; ++p) {
            std::vector<double> row(k);
            for (auto& x : row) x = rng.uniform(0, 1);
            ranks.push_back(average_ranks(row));
            for (std::size_t j = 0; j < k; ++j) mean[j] += ranks.back()[j] / static_cast<double>(n);
        }
        CHECK(friedman_statistic(mean, n) == doctest::Approx(friedman_oracle(ranks)).epsilon(1e-9));
    }
}

TEST_CASE("spearman matches the tie-free closed form") {
    CHECK(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{10, 20, 30}) == doctest::Approx(1.0));
    CHECK(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{3, 2, 1}) == doctest::Approx(-1.0));
    CHECK(std::isnan(spearman(std::vector<double>{1, 1}, std::vector<double>{1, 2})));
    Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.below(12);
        std::vector<double> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) a[i] = rng.uniform01(), b[i] = rng.uniform01();
        const auto ra = average_ranks(a), rb = average_ranks(b);
        double d2 = 0;
        for (std::size_t i = 0; i < n; ++i) d2 += (ra[i] - rb[i]) * (ra[i] - rb[i]);
        const double nn = static_cast<double>(n);
        CHECK(spearman(a, b) == doctest::Approx(1 - 6 * d2 / (nn * (nn * nn - 1))).epsilon(1e-12));
    }
}

TEST_CASE("win matrix examples") {
    MethodMedians m(2);
    m[0].first = "A";
    m[1].first = "B";
    for (int p = 1; p <= 24; ++p) {
        const std::string id = "f" + std::to_string(p);
        m[0].second[id] = p <= 18 ? 0.1 : 0.5;
        m[1].second[id] = 0.3;
    }
    auto w = win_matrix(m);
    CHECK(w.percent(0, 1) == 75.0);
    CHECK(w.percent(1, 0) == 25.0);
    CHECK(win_matrix_csv(w).find("A,B,18,0,6,24,75.0\n") != std::string::npos);

    for (auto& [id, v] : m[0].second) v = 0.0;
    w = win_matrix(m);
    CHECK(w.percent(0, 1) == 100.0);

    m[0].second = m[1].second;
    w = win_matrix(m);
    CHECK(w.percent(0, 1) == 0.0);
    CHECK(w.percent(1, 0) == 0.0);
    CHECK(w.ties[0][1] == 24);

    m[1].second.erase("f3");
    CHECK_THROWS_AS(win_matrix(m), std::invalid_argument);
    m[1].second["g"] = 1.0;
    CHECK_THROWS_AS(win_matrix(m), std::invalid_argument);
}

TEST_CASE("win matrix closure over random medians") {
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t k = 2 + rng.below(4), n = 1 + rng.below(30);
        MethodMedians m(k);
        for (std::size_t i = 0; i < k; ++i) {
            m[i].first = "m" + std::to_string(i);
            for (std::size_t p = 0; p < n; ++p) m[i].second["p" + std::to_string(p)] = static_cast<double>(rng.below(3));
        }
        const auto w = win_matrix(m);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                if (i == j) continue;
                CHECK(w.wins[i][j] + w.wins[j][i] + w.ties[i][j] == n);
                CHECK(w.ties[i][j] == w.ties[j][i]);
                CHECK(w.percent(i, j) >= 0.0);
                CHECK(w.percent(i, j) <= 100.0);
            }
    }
}

TEST_CASE("medians CSV round trip") {
    const auto m = read_medians_csv("method,problem,median\nA,f1,0.5\nB,f1,0.25\nA,f2,1\nB,f2,2\n");
    REQUIRE(m.size() == 2);
    CHECK(m[0].first == "A");
    CHECK(m[1].second.at("f1") == 0.25);
    CHECK(win_matrix(m).wins[0][1] == 1);
    CHECK_THROWS(read_medians_csv("method,problem,median\nA,f1\n"));
    CHECK_THROWS(read_medians_csv("method,problem,median\nA,f1,x\n"));
}

TEST_CASE("optimizers spend exactly the budget") {
    for (OptimizerKind kind : kPortfolio) {
        for (std::size_t dim = 1; dim <= 4; ++dim) {
            for (std::size_t budget : {1, 2, 3, 7, 50, 123, 997}) {
                std::size_t calls = 0;
                const Objective f = [&](std::span<const double> x) {
                    ++calls;
                    for (double v : x) REQUIRE((v >= -5.0 && v <= 5.0));
                    return sphere(x);
                };
                const auto r = run_optimizer(kind, f, dim, budget, 3);
                CHECK(calls == budget);
                CHECK(r.evaluations == budget);
                CHECK(r.trace.size() == budget);
                CHECK(r.trace.back() == r.best_value);
                CHECK(r.best_value == sphere(r.best_point));
                CHECK(std::is_sorted(r.trace.rbegin(), r.trace.rend()));
            }
        }
    }
}

TEST_CASE("budget 1 returns the single evaluation") {
    for (OptimizerKind kind : kPortfolio) {
        std::vector<double> seen;
        const Objective f = [&](std::span<const double> x) {
            seen.assign(x.begin(), x.end());
            return sphere(x) + 1.0;
        };
        const auto r = run_optimizer(kind, f, 3, 1, 42);
        CHECK(r.best_point == seen);
        CHECK(r.best_value == sphere(seen) + 1.0);
    }
}

TEST_CASE("optimizer traces are a pure function of the seed") {
    const Objective f = [](std::span<const double> x) { return sphere(x) + std::sin(3 * x[0]); };
    for (OptimizerKind kind : kPortfolio) {
        const auto a = run_optimizer(kind, f, 2, 400, 9), b = run_optimizer(kind, f, 2, 400, 9);
        CHECK(a.trace == b.trace);
        CHECK(a.best_point == b.best_point);
        const auto c = run_optimizer(kind, f, 2, 400, 10);
        CHECK(c.best_point != a.best_point);
    }
}

TEST_CASE("DE solves the 2-D sphere at budget 2000") {
    int solved = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
        solved += run_optimizer(OptimizerKind::DifferentialEvolution, sphere, 2, 2000, seed).best_value <= 1e-3;
    CHECK(solved >= 9);
}

TEST_CASE("local and swarm optimizers beat random search on the sphere") {
    double rs = 0, nm = 0, pso = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        rs += run_optimizer(OptimizerKind::RandomSearch, sphere, 3, 3000, seed).best_value;
        nm += run_optimizer(OptimizerKind::NelderMead, sphere, 3, 3000, seed).best_value;
        pso += run_optimizer(OptimizerKind::ParticleSwarm, sphere, 3, 3000, seed).best_value;
    }
    CHECK(nm < rs);
    CHECK(pso < rs);
    CHECK(nm < 1e-6);
}

TEST_CASE("non-finite objective values rank last but still count") {
    std::size_t calls = 0;
    const Objective f = [&](std::span<const double>) {
        ++calls;
        return NAN;
    };
    for (OptimizerKind kind : kPortfolio) {
        calls = 0;
        const auto r = run_optimizer(kind, f, 2, 77, 1);
        CHECK(calls == 77);
        CHECK(r.best_value == INFINITY);
    }
    CHECK_THROWS(run_optimizer(OptimizerKind::DifferentialEvolution, sphere, 2, 0, 1));
}

TEST_CASE("optimizer names") {
    for (OptimizerKind kind : kPortfolio) CHECK(optimizer_from_name(optimizer_name(kind)) == kind);
    CHECK_THROWS(optimizer_from_name("cma"));
}

TEST_CASE("rank table examples") {
    auto t = rank_table({"p1", "p2"}, {"A", "B"}, Matrix(2, 2, std::vector<double>{0, 1, 0, 1}));
    CHECK(t.mean_ranks == std::vector<double>{1, 2});
    CHECK(t.friedman == doctest::Approx(2.0));

    t = rank_table({"p1", "p2", "p3"}, {"A", "B", "C"}, Matrix(3, 3, 4.0));
    for (double r : t.mean_ranks) CHECK(r == 2.0);
    CHECK(t.friedman == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS(rank_table({"p1"}, {"A", "B"}, Matrix(1, 2)));
    CHECK_THROWS(rank_table({"p1", "p2"}, {"A"}, Matrix(2, 1)));
}

TEST_CASE("rank table rows sum to k(k+1)/2") {
    Rng rng(2);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + rng.below(6), k = 2 + rng.below(4);
        Matrix m(n, k);
        for (auto& v : m.data()) v = static_cast<double>(rng.below(3));
        std::vector<std::string> ps(n, "p"), os(k, "o");
        const auto t = rank_table(ps, os, m);
        const double kk = static_cast<double>(k);
        for (std::size_t p = 0; p < n; ++p) {
            double s = 0;
            for (std::size_t o = 0; o < k; ++o) s += t.ranks(p, o);
            CHECK(s == doctest::Approx(kk * (kk + 1) / 2));
        }
        CHECK(std::accumulate(t.mean_ranks.begin(), t.mean_ranks.end(), 0.0) == doctest::Approx(kk * (kk + 1) / 2));
    }
}

TEST_CASE("portfolio ranking is deterministic across worker counts") {
    std::vector<targets::TargetFunction> suite{targets::builtin("sphere", 2), targets::builtin("classic/3", 2),
                                               targets::builtin("classic/15", 2)};
    PortfolioOptions o;
    o.budget_multiplier = 50;
    o.repetitions = 3;
    o.seed = 4;
    const auto a = rank_portfolio(suite, o);
    o.workers = 3;
    const auto b = rank_portfolio(suite, o);
    CHECK(a.medians == b.medians);
    CHECK(rank_csv(a) == rank_csv(b));
    CHECK(a.problems.size() == 3);
    CHECK(a.optimizers.size() == 4);
    CHECK(rank_csv(a).rfind("friedman,,,", std::string::npos) != std::string::npos);

    std::vector<targets::TargetFunction> mixed{targets::builtin("sphere", 2), targets::builtin("sphere", 3)};
    CHECK_THROWS(rank_portfolio(mixed, o));
}

TEST_CASE("grid export") {
    const auto sph = targets::builtin("sphere", 2);
    auto g = grid_render(sph, 3);
    REQUIRE(g.values.size() == 9);
    CHECK(g.values[4] == 0.0);
    CHECK(g.axis[0] == doctest::Approx(-10.0 / 3));

    g = grid_render(sph, 1);
    REQUIRE(g.values.size() == 1);
    CHECK(g.axis[0] == 0.0);
    CHECK(g.values[0] == 0.0);

    const auto program = dsl::compile(std::string(testing::kCubicExample));
    g = grid_render(program, 64);
    REQUIRE(g.values.size() == 4096);
    CHECK(std::all_of(g.values.begin(), g.values.end(), [](double v) { return std::isfinite(v); }));

    // row-major with y as the slow index
    const auto px = dsl::compile("def problem(x):\n    return x[0] + 10 * x[1]\n");
    g = grid_render(px, 4);
    for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(g.values[j * 4 + i] == doctest::Approx(g.axis[i] + 10 * g.axis[j]));
    const std::string csv = grid_csv(g);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);
    CHECK(csv.rfind("x,y,value\n", 0) == 0);

    CHECK_THROWS_AS(grid_render(targets::builtin("sphere", 3), 4), std::invalid_argument);
    CHECK_THROWS_AS(grid_render(dsl::compile("def problem(x):\n    return x[2]\n"), 4), std::invalid_argument);
    CHECK_THROWS(grid_render(sph, 0));
}

TEST_CASE("resampling a constant program flags it non-robust") {
    const auto program = dsl::compile("def problem(x):\n    return 3.0\n");
    const auto s = resample_median(program, sphere_target(), bounds2(), kDefaultResampleBase, 6);
    CHECK(s.invalid_count == 6);
    CHECK_FALSE(s.robust);
    CHECK(std::isnan(s.median));
    const auto csv = resample_csv(s);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
    CHECK(csv.find("1000000,nan,0\n") != std::string::npos);
}

TEST_CASE("resampling the target's own program stays close") {
    const auto program = dsl::compile(std::string(testing::kSphere));
    const auto a = resample_median(program, sphere_target(), bounds2(), 500, 8);
    CHECK(a.invalid_count == 0);
    CHECK(a.robust);
    CHECK(a.q25 <= a.median);
    CHECK(a.median <= a.q75);
    CHECK(a.median < 0.5);
    CHECK(a.seeds.front() == 500);
    CHECK(a.seeds.back() == 507);
    const auto b = resample_median(program, sphere_target(), bounds2(), 500, 8, {}, 3);
    CHECK(a.distances == b.distances);
}

TEST_CASE("resample seeds must avoid the search seeds") {
    const auto program = dsl::compile(std::string(testing::kSphere));
    CHECK_THROWS_AS(resample_median(program, sphere_target(), bounds2(), 0, 4, {0}), std::invalid_argument);
    CHECK_THROWS_AS(resample_median(program, sphere_target(), bounds2(), 10, 4, {13}), std::invalid_argument);
    CHECK_NOTHROW(resample_median(program, sphere_target(), bounds2(), 10, 2, {12, 9}));
}
