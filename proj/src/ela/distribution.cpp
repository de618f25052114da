#include <cmath>
#include <stdexcept>

#include "eotf/ela/features.hpp"

namespace eotf::ela {

std::optional<double> skewness(std::span<const double> y) {
    const std::size_t n = y.size();
    if (n < 3) return std::nullopt;
    bool constant = true;
    double mean = 0.0;
    for (double v : y) {
        mean += v;
        constant = constant && v == y[0];
    }
    if (constant) return std::nullopt;
    mean /= static_cast<double>(n);
    double m2 = 0.0, m3 = 0.0;
    for (double v : y) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    if (!(m2 > 0.0)) return std::nullopt;
    return m3 / std::pow(m2, 1.5);
}

double fitness_std(std::span<const double> y) {
    const std::size_t n = y.size();
    if (n < 2) throw std::invalid_argument("fitness_std needs at least two values");
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : y) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(n - 1));
}

}  // namespace eotf::ela
