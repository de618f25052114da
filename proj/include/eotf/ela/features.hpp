#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eotf/common/matrix.hpp"
#include "eotf/ela/sample.hpp"

namespace eotf::dsl {
class TypedProgram;
}

namespace eotf::ela {

inline constexpr std::size_t kFeatureCount = 8;

/// Slot order of every feature vector.
enum class Feature : std::size_t {
    LinSimpleAdjR2,
    LinInteractAdjR2,
    QuadSimpleAdjR2,
    QuadInteractAdjR2,
    Skewness,
    NbcFitnessCor,
    NbcSdRatio,
    FitnessStd,
};

inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames{
    "ela_meta.lin_simple.adj_r2",
    "ela_meta.lin_w_interact.adj_r2",
    "ela_meta.quad_simple.adj_r2",
    "ela_meta.quad_w_interact.adj_r2",
    "ela_distr.skewness",
    "nbc.nb_fitness.cor",
    "nbc.nn_nb.sd_ratio",
    "fitness_distance.fitness_std",
};

/// Raw feature values; an empty slot is UNDEFINED.
struct ElaVector {
    std::array<std::optional<double>, kFeatureCount> values{};

    std::optional<double>& operator[](Feature f) { return values[static_cast<std::size_t>(f)]; }
    const std::optional<double>& operator[](Feature f) const { return values[static_cast<std::size_t>(f)]; }
    bool fully_defined() const noexcept;
    bool operator==(const ElaVector&) const = default;
};

enum class RegressionModel { LinSimple, LinInteract, QuadSimple, QuadInteract };

/// Number of non-intercept regressors for the model in `dim` variables.
std::size_t regressor_count(RegressionModel model, std::size_t dim) noexcept;

/// OLS with intercept; 1 - (1 - R^2)(n - 1)/(n - p - 1). UNDEFINED for
/// constant y, a rank-deficient design or n <= p + 1.
std::optional<double> adj_r2(const Matrix& X, std::span<const double> y, RegressionModel model);

/// Plain coefficient of determination for the same fit.
std::optional<double> r_squared(const Matrix& X, std::span<const double> y, RegressionModel model);

/// Moment coefficient m3 / m2^1.5 with 1/n central moments. UNDEFINED for
/// constant y or n < 3.
std::optional<double> skewness(std::span<const double> y);

/// Sample standard deviation, n - 1 denominator. Requires n >= 2.
double fitness_std(std::span<const double> y);

struct NbcFeatures {
    std::optional<double> cor;
    std::optional<double> sd_ratio;
};

/// Nearest-better features under minimization. Points without a strictly
/// better point are left out of the nearest-better statistics; ties between
/// equidistant neighbours go to the smaller index. Both values are UNDEFINED
/// when sd(nb) = 0, the in-degree is constant, or fewer than 3 points have a
/// nearest-better neighbour.
NbcFeatures nbc_features(const Matrix& X, std::span<const double> y);

/// All eight features of an evaluated sample.
ElaVector extract_features(const Matrix& X, std::span<const double> y);

class InvalidLandscape : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Maps a whole sample (one point per row) to objective values.
using BatchObjective = std::function<std::vector<double>(const Matrix&)>;

BatchObjective objective_of(const dsl::TypedProgram& program);

/// Sampled landscape: features are only computed when every value is finite.
struct Landscape {
    bool finite = false;
    ElaVector features;

    bool valid() const noexcept { return finite && features.fully_defined(); }
    std::string invalid_reason() const;
};

Landscape sample_landscape(const BatchObjective& objective, const SampleDesign& design);

/// Throws InvalidLandscape on non-finite values or any UNDEFINED slot.
ElaVector compute_features(const BatchObjective& objective, const SampleDesign& design);
ElaVector compute_features(const dsl::TypedProgram& program, const SampleDesign& design);

}  // namespace eotf::ela
