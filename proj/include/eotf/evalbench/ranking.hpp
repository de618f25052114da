#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "eotf/common/matrix.hpp"
#include "eotf/evalbench/optimizers.hpp"
#include "eotf/targets/target_function.hpp"

namespace eotf::evalbench {

struct RankTable {
    std::vector<std::string> problems;
    std::vector<std::string> optimizers;
    /// problems x optimizers.
    Matrix medians;
    Matrix ranks;
    std::vector<double> mean_ranks;
    double friedman = 0.0;
};

/// Ranks each problem row (1 = lowest median) and computes the Friedman
/// statistic. Needs at least two problems and two optimizers.
RankTable rank_table(std::vector<std::string> problems, std::vector<std::string> optimizers, Matrix medians);

struct PortfolioOptions {
    std::vector<OptimizerKind> optimizers{std::begin(kPortfolio), std::end(kPortfolio)};
    std::size_t budget_multiplier = 10000;
    std::size_t repetitions = 5;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
};

/// Every function must share one dimension. Repetition r on problem p uses
/// the same seed for every optimizer.
RankTable rank_portfolio(const std::vector<targets::TargetFunction>& suite, const PortfolioOptions& options = {});

/// kind,problem,optimizer,value with kinds median, rank, mean_rank, friedman.
std::string rank_csv(const RankTable& table);

/// The mean_rank rows of a rank_csv document, in file order.
std::vector<std::pair<std::string, double>> read_mean_ranks(const std::string& csv);

}  // namespace eotf::evalbench
