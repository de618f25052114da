#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <string_view>

namespace eotf::testing {

// Example generated function used as a conformance input throughout.
inline constexpr std::string_view kCubicExample = R"(import numpy as np

def problem(x: np.ndarray) -> float:
 quadratic_term = 0.13 * (
   x[0] ** 2 + x[1] ** 2
 )
 cosine_modulation = 0.13 * np.cos(
   x[0] - x[1]
 )
 linear_interaction_term = 0.045 * (
   x[0] + x[1] + x[0] * x[1]
 )
 skewed_cubic_term = 0.027 * (
   x[0] ** 3 + 0.5 * x[1] ** 3
 )
 bias = 0.05
 return (
   quadratic_term
   + cosine_modulation
   + linear_interaction_term
   + skewed_cubic_term
   + bias
 )
)";

inline constexpr std::string_view kSphere = "def problem(x):\n    return sum(x ** 2)\n";

/// Bitwise equality, treating every NaN as equal to every other NaN.
inline bool same_bits(double a, double b) {
    if (std::isnan(a) && std::isnan(b)) return true;
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

}  // namespace eotf::testing
