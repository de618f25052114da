#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eotf/dsl/typed_program.hpp"
#include "eotf/ela/normalize.hpp"

namespace eotf::evalbench {

inline constexpr std::uint64_t kDefaultResampleBase = 1'000'000;

struct ResampleStats {
    std::vector<std::uint64_t> seeds;
    /// Empty where the draw was invalid.
    std::vector<std::optional<double>> distances;
    double median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
    std::size_t invalid_count = 0;
    /// False when more than half of the draws are invalid.
    bool robust = true;

    std::size_t valid_count() const noexcept { return distances.size() - invalid_count; }
};

/// Seeds base_seed .. base_seed + count - 1. Throws std::invalid_argument if
/// any of them is a search seed. With no valid draw the statistics are NaN.
ResampleStats resample_median(const dsl::TypedProgram& program, const ela::NormalizedVector& target,
                              const ela::Bounds& bounds, std::uint64_t base_seed = kDefaultResampleBase,
                              std::size_t count = 100, const std::vector<std::uint64_t>& search_seeds = {},
                              std::size_t workers = 1);

/// seed,distance,valid with one row per draw.
std::string resample_csv(const ResampleStats& stats);

}  // namespace eotf::evalbench
