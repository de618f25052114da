#include "eotf/targets/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "eotf/common/parallel.hpp"

namespace eotf::targets {

BoundsReport compute_bounds_report(const std::string& suite_name, const std::vector<TargetFunction>& suite,
                                   std::size_t dim, const BoundsOptions& options) {
    if (suite.empty()) throw std::invalid_argument("bounds: empty suite");
    if (options.seeds_per_problem == 0) throw std::invalid_argument("bounds: need at least one seed per problem");
    for (const auto& f : suite)
        if (f.dim() != dim) throw std::invalid_argument("bounds: " + f.id() + " is not " + std::to_string(dim) + "-D");

    const std::size_t seeds = options.seeds_per_problem;
    BoundsReport report;
    report.samples.resize(suite.size() * seeds);
    std::vector<std::uint8_t> finite(report.samples.size(), 0);
    parallel_for(report.samples.size(), options.workers, [&](std::size_t t) {
        ela::SampleDesign design = ela::SampleDesign::standard(dim, options.base_seed + t % seeds);
        if (options.sample_size != 0) design.n = options.sample_size;
        const ela::Landscape l = ela::sample_landscape(suite[t / seeds].objective(), design);
        finite[t] = l.finite;
        if (l.finite) report.samples[t] = l.features;
    });

    ela::Bounds& b = report.bounds;
    b.suite = suite_name;
    b.dim = dim;
    for (std::size_t j = 0; j < seeds; ++j) b.seeds.push_back(options.base_seed + j);
    std::array<bool, ela::kFeatureCount> seen{};
    for (std::size_t t = 0; t < report.samples.size(); ++t) {
        if (!finite[t]) continue;
        ++b.samples_used;
        for (std::size_t i = 0; i < ela::kFeatureCount; ++i) {
            const auto& v = report.samples[t].values[i];
            if (!v || !std::isfinite(*v)) continue;
            if (!seen[i]) {
                b.ranges[i] = {*v, *v};
                seen[i] = true;
            } else {
                b.ranges[i].min = std::min(b.ranges[i].min, *v);
                b.ranges[i].max = std::max(b.ranges[i].max, *v);
            }
        }
    }
    for (std::size_t i = 0; i < ela::kFeatureCount; ++i) {
        if (!seen[i])
            throw std::runtime_error("bounds: feature " + std::string(ela::kFeatureNames[i]) +
                                     " is undefined in every sample of suite " + suite_name);
    }
    return report;
}

ela::Bounds compute_bounds(const std::string& suite_name, const std::vector<TargetFunction>& suite, std::size_t dim,
                           const BoundsOptions& options) {
    return compute_bounds_report(suite_name, suite, dim, options).bounds;
}

}  // namespace eotf::targets
