#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eotf/ela/normalize.hpp"
#include "eotf/targets/target_function.hpp"

namespace eotf::targets {

struct BoundsOptions {
    std::uint64_t base_seed = 0;
    std::size_t seeds_per_problem = 100;
    std::size_t workers = 1;
    /// 0 selects 250 * dim.
    std::size_t sample_size = 0;
};

struct BoundsReport {
    ela::Bounds bounds;
    /// Raw vectors in (problem, seed) order; non-finite samples are empty.
    std::vector<ela::ElaVector> samples;
};

/// Seeds are base_seed + j for j < seeds_per_problem, shared by every
/// problem. Throws if some feature is UNDEFINED in every sample.
BoundsReport compute_bounds_report(const std::string& suite_name, const std::vector<TargetFunction>& suite,
                                   std::size_t dim, const BoundsOptions& options);

ela::Bounds compute_bounds(const std::string& suite_name, const std::vector<TargetFunction>& suite, std::size_t dim,
                           const BoundsOptions& options);

}  // namespace eotf::targets
