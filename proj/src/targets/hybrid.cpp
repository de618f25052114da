#include <cmath>

#include "eotf/targets/target_function.hpp"

namespace eotf::targets {

TargetFunction hybrid(const TargetFunction& a, const TargetFunction& b, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("hybrid: alpha must lie in [0, 1]");
    if (a.dim() != b.dim()) throw std::invalid_argument("hybrid: " + a.id() + " and " + b.id() + " differ in dim");
    if (!a.known_min() || !b.known_min())
        throw std::invalid_argument("hybrid: both components need a known minimum");
    const double min_a = *a.known_min(), min_b = *b.known_min();
    // Components can dip a rounding error below their recorded minimum.
    auto mix = [alpha, min_a, min_b](double fa, double fb) {
        const double ga = std::max(fa - min_a, 0.0) + kHybridEpsilon;
        const double gb = std::max(fb - min_b, 0.0) + kHybridEpsilon;
        return std::exp(alpha * std::log(ga) + (1.0 - alpha) * std::log(gb));
    };
    const std::string id = "hybrid(" + a.id() + "," + b.id() + "," + Json(alpha).dump() + ")";
    Json meta{{"kind", "hybrid"}, {"components", {a.id(), b.id()}}, {"alpha", alpha}, {"dim", a.dim()}};
    return TargetFunction(
        id, a.dim(), [a, b, mix](std::span<const double> x) { return mix(a(x), b(x)); }, std::nullopt,
        std::move(meta), [a, b, mix](const Matrix& m) {
            std::vector<double> fa = a.evaluate(m);
            const std::vector<double> fb = b.evaluate(m);
            for (std::size_t i = 0; i < fa.size(); ++i) fa[i] = mix(fa[i], fb[i]);
            return fa;
        });
}

std::vector<TargetFunction> ring_suite(const std::vector<TargetFunction>& suite, double alpha, bool generic) {
    if (suite.empty()) throw std::invalid_argument("ring: empty suite");
    if (!generic && suite.size() != kClassicCount)
        throw std::invalid_argument("ring: the suite has " + std::to_string(suite.size()) +
                                    " members, 24 required (use generic pairing for other sizes)");
    std::vector<TargetFunction> out;
    out.reserve(suite.size());
    for (std::size_t k = 0; k < suite.size(); ++k) out.push_back(hybrid(suite[k], suite[(k + 1) % suite.size()], alpha));
    return out;
}

}  // namespace eotf::targets
