#include "eotf/ela/features.hpp"

#include <cmath>

#include "eotf/dsl/typed_program.hpp"

namespace eotf::ela {

bool ElaVector::fully_defined() const noexcept {
    for (const auto& v : values)
        if (!v || !std::isfinite(*v)) return false;
    return true;
}

ElaVector extract_features(const Matrix& X, std::span<const double> y) {
    ElaVector out;
    out[Feature::LinSimpleAdjR2] = adj_r2(X, y, RegressionModel::LinSimple);
    out[Feature::LinInteractAdjR2] = adj_r2(X, y, RegressionModel::LinInteract);
    out[Feature::QuadSimpleAdjR2] = adj_r2(X, y, RegressionModel::QuadSimple);
    out[Feature::QuadInteractAdjR2] = adj_r2(X, y, RegressionModel::QuadInteract);
    out[Feature::Skewness] = skewness(y);
    const NbcFeatures nbc = nbc_features(X, y);
    out[Feature::NbcFitnessCor] = nbc.cor;
    out[Feature::NbcSdRatio] = nbc.sd_ratio;
    if (y.size() >= 2) out[Feature::FitnessStd] = fitness_std(y);
    return out;
}

BatchObjective objective_of(const dsl::TypedProgram& program) {
    return [program](const Matrix& points) { return dsl::evaluate_batch(program, points).values; };
}

std::string Landscape::invalid_reason() const {
    if (!finite) return "non-finite objective value on the sample";
    std::string missing;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        if (!features.values[i] || !std::isfinite(*features.values[i])) {
            if (!missing.empty()) missing += ", ";
            missing += kFeatureNames[i];
        }
    }
    if (missing.empty()) return {};
    return "undefined feature: " + missing;
}

Landscape sample_landscape(const BatchObjective& objective, const SampleDesign& design) {
    const Matrix X = draw_sample(design);
    const std::vector<double> y = objective(X);
    Landscape out;
    if (y.size() != X.rows()) throw std::runtime_error("objective returned the wrong number of values");
    out.finite = true;
    for (double v : y) {
        if (!std::isfinite(v)) {
            out.finite = false;
            break;
        }
    }
    if (out.finite) out.features = extract_features(X, y);
    return out;
}

ElaVector compute_features(const BatchObjective& objective, const SampleDesign& design) {
    Landscape l = sample_landscape(objective, design);
    if (!l.valid()) throw InvalidLandscape(l.invalid_reason());
    return l.features;
}

ElaVector compute_features(const dsl::TypedProgram& program, const SampleDesign& design) {
    return compute_features(objective_of(program), design);
}

}  // namespace eotf::ela
