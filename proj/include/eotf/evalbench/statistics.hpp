#pragma once

#include <span>
#include <vector>

namespace eotf::evalbench {

/// Linear interpolation between order statistics: position q * (n - 1).
/// Throws std::invalid_argument on empty input.
double quantile(std::span<const double> values, double q);
double median(std::span<const double> values);

/// Ascending ranks starting at 1; tied values share their average rank.
std::vector<double> average_ranks(std::span<const double> values);

/// 12N / (k(k+1)) * (sum R_j^2 - k(k+1)^2 / 4) over mean ranks R_j.
double friedman_statistic(std::span<const double> mean_ranks, std::size_t problems);

/// Pearson correlation of average ranks. NaN when either side is constant.
double spearman(std::span<const double> a, std::span<const double> b);

}  // namespace eotf::evalbench
