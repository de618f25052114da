#include "eotf/ela/sample.hpp"

#include <stdexcept>
#include <string>

#include "eotf/common/rng.hpp"

namespace eotf::ela {

SampleDesign SampleDesign::standard(std::size_t dim, std::uint64_t seed) {
    SampleDesign d;
    d.dim = dim;
    d.n = 250 * dim;
    d.seed = seed;
    return d;
}

std::size_t SampleDesign::minimum_size(std::size_t dim) noexcept {
    return 8 * (dim * (dim - (dim > 0 ? 1 : 0)) / 2) + 2 * dim + 2;
}

void SampleDesign::validate() const {
    if (dim == 0) throw std::invalid_argument("sample design: dim must be positive");
    if (n < minimum_size(dim)) {
        throw std::invalid_argument("sample design: n = " + std::to_string(n) + " is below the minimum " +
                                    std::to_string(minimum_size(dim)) + " for dim " + std::to_string(dim));
    }
    if (!(lower < upper)) throw std::invalid_argument("sample design: empty box");
}

Matrix draw_sample(const SampleDesign& design) {
    design.validate();
    Matrix m(design.n, design.dim);
    switch (design.scheme) {
        case SamplingScheme::UniformIid: {
            Rng rng(design.seed);
            for (double& v : m.data()) v = rng.uniform(design.lower, design.upper);
            break;
        }
    }
    return m;
}

}  // namespace eotf::ela
