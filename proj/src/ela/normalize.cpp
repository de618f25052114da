#include "eotf/ela/normalize.hpp"

#include <cmath>
#include <stdexcept>

namespace eotf::ela {

bool NormalizedVector::fully_defined() const noexcept {
    for (std::size_t i = 0; i < kFeatureCount; ++i)
        if (!defined[i] || !std::isfinite(values[i])) return false;
    return true;
}

NormalizedVector normalize(const ElaVector& raw, const Bounds& bounds) {
    NormalizedVector out;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        if (!raw.values[i]) continue;
        out.defined[i] = true;
        const FeatureRange& r = bounds.ranges[i];
        if (r.max == r.min) {
            out.degenerate[i] = true;
            out.values[i] = 0.0;
        } else {
            out.values[i] = (*raw.values[i] - r.min) / (r.max - r.min);
        }
    }
    return out;
}

NormalizedVector as_normalized(const ElaVector& values) {
    NormalizedVector out;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        if (!values.values[i]) continue;
        out.defined[i] = true;
        out.values[i] = *values.values[i];
    }
    return out;
}

double distance(const NormalizedVector& a, const NormalizedVector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        if (!a.defined[i] || !b.defined[i])
            throw std::invalid_argument(std::string("distance: undefined feature ") + std::string(kFeatureNames[i]));
        const double d = a.values[i] - b.values[i];
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace eotf::ela
