#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "eotf/ela/features.hpp"

namespace eotf::ela {

struct FeatureRange {
    double min = 0.0;
    double max = 0.0;
    bool operator==(const FeatureRange&) const = default;
};

/// Per-feature envelope of a reference suite at one dimension.
struct Bounds {
    std::string suite;
    std::size_t dim = 0;
    std::vector<std::uint64_t> seeds;
    std::size_t samples_used = 0;
    std::array<FeatureRange, kFeatureCount> ranges{};

    bool operator==(const Bounds&) const = default;
};

struct NormalizedVector {
    std::array<double, kFeatureCount> values{};
    std::array<bool, kFeatureCount> defined{};
    /// Slots whose bound had min == max; their value is pinned to 0.
    std::array<bool, kFeatureCount> degenerate{};

    bool fully_defined() const noexcept;
    bool operator==(const NormalizedVector&) const = default;
};

/// (raw - min) / (max - min) per slot, no clipping.
NormalizedVector normalize(const ElaVector& raw, const Bounds& bounds);

/// Wraps already-normalized values (feature files flagged as normalized).
NormalizedVector as_normalized(const ElaVector& values);

/// Euclidean distance. Throws std::invalid_argument if either side has an
/// undefined slot.
double distance(const NormalizedVector& a, const NormalizedVector& b);

}  // namespace eotf::ela
