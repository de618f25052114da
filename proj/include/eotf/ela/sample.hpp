#pragma once

#include <cstddef>
#include <cstdint>

#include "eotf/common/matrix.hpp"

namespace eotf::ela {

enum class SamplingScheme { UniformIid };

struct SampleDesign {
    std::size_t dim = 2;
    std::size_t n = 500;
    std::uint64_t seed = 0;
    SamplingScheme scheme = SamplingScheme::UniformIid;
    double lower = -5.0;
    double upper = 5.0;

    /// n = 250 * dim over [-5, 5]^dim.
    static SampleDesign standard(std::size_t dim, std::uint64_t seed);

    /// Smallest n for which the full quadratic model is over-determined
    /// by the margin this toolkit requires: 8 * C(dim, 2) + 2 * dim + 2.
    static std::size_t minimum_size(std::size_t dim) noexcept;

    /// Throws std::invalid_argument on dim == 0, n below minimum_size or an
    /// empty box.
    void validate() const;
};

/// n x dim matrix; a pure function of the design.
Matrix draw_sample(const SampleDesign& design);

}  // namespace eotf::ela
