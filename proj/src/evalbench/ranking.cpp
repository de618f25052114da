#include "eotf/evalbench/ranking.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "eotf/common/parallel.hpp"
#include "eotf/common/rng.hpp"
#include "eotf/evalbench/statistics.hpp"

namespace eotf::evalbench {

RankTable rank_table(std::vector<std::string> problems, std::vector<std::string> optimizers, Matrix medians) {
    const std::size_t n = problems.size(), k = optimizers.size();
    if (n < 2 || k < 2) throw std::invalid_argument("ranking needs at least two problems and two optimizers");
    if (medians.rows() != n || medians.cols() != k) throw std::invalid_argument("median table shape mismatch");
    RankTable t;
    t.problems = std::move(problems);
    t.optimizers = std::move(optimizers);
    t.medians = std::move(medians);
    t.ranks = Matrix(n, k);
    t.mean_ranks.assign(k, 0.0);
    std::vector<double> row(k);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t o = 0; o < k; ++o) row[o] = t.medians(p, o);
        const auto r = average_ranks(row);
        for (std::size_t o = 0; o < k; ++o) {
            t.ranks(p, o) = r[o];
            t.mean_ranks[o] += r[o];
        }
    }
    for (auto& m : t.mean_ranks) m /= static_cast<double>(n);
    t.friedman = friedman_statistic(t.mean_ranks, n);
    return t;
}

RankTable rank_portfolio(const std::vector<targets::TargetFunction>& suite, const PortfolioOptions& options) {
    if (suite.size() < 2 || options.optimizers.size() < 2)
        throw std::invalid_argument("ranking needs at least two problems and two optimizers");
    if (options.repetitions == 0) throw std::invalid_argument("repetitions must be positive");
    const std::size_t dim = suite.front().dim();
    for (const auto& f : suite)
        if (f.dim() != dim) throw std::invalid_argument("suite mixes dimensions");
    const std::size_t n = suite.size(), k = options.optimizers.size(), reps = options.repetitions;
    const std::size_t budget = options.budget_multiplier * dim;

    std::vector<double> best(n * k * reps);
    parallel_for(best.size(), options.workers, [&](std::size_t cell) {
        const std::size_t p = cell / (k * reps), o = (cell / reps) % k, r = cell % reps;
        const auto& f = suite[p];
        const Objective obj = [&f](std::span<const double> x) { return f(x); };
        best[cell] = run_optimizer(options.optimizers[o], obj, dim, budget, mix_seed(options.seed, p * reps + r))
                         .best_value;
    });

    std::vector<std::string> problems, names;
    for (const auto& f : suite) problems.push_back(f.id());
    for (auto kind : options.optimizers) names.push_back(optimizer_name(kind));
    Matrix med(n, k);
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t o = 0; o < k; ++o)
            med(p, o) = median(std::span<const double>(best.data() + (p * k + o) * reps, reps));
    return rank_table(std::move(problems), std::move(names), std::move(med));
}

std::string rank_csv(const RankTable& t) {
    std::string out = "kind,problem,optimizer,value\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (std::size_t p = 0; p < t.problems.size(); ++p)
        for (std::size_t o = 0; o < t.optimizers.size(); ++o)
            out += "median," + t.problems[p] + "," + t.optimizers[o] + "," + num(t.medians(p, o)) + "\n";
    for (std::size_t p = 0; p < t.problems.size(); ++p)
        for (std::size_t o = 0; o < t.optimizers.size(); ++o)
            out += "rank," + t.problems[p] + "," + t.optimizers[o] + "," + num(t.ranks(p, o)) + "\n";
    for (std::size_t o = 0; o < t.optimizers.size(); ++o)
        out += "mean_rank,," + t.optimizers[o] + "," + num(t.mean_ranks[o]) + "\n";
    out += "friedman,,," + num(t.friedman) + "\n";
    return out;
}

std::vector<std::pair<std::string, double>> read_mean_ranks(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::vector<std::pair<std::string, double>> out;
    while (std::getline(in, line)) {
        if (line.rfind("mean_rank,", 0) != 0) continue;
        const auto a = line.find(',', 10), b = line.find(',', a + 1);
        if (a == std::string::npos || b == std::string::npos) throw std::invalid_argument("malformed mean_rank row");
        out.emplace_back(line.substr(a + 1, b - a - 1), std::stod(line.substr(b + 1)));
    }
    if (out.empty()) throw std::invalid_argument("no mean_rank rows found");
    return out;
}

}  // namespace eotf::evalbench
