#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "eotf/common/matrix.hpp"
#include "eotf/ela/features.hpp"

namespace eotf::dsl {
class TypedProgram;
}

namespace eotf::targets {

using Json = nlohmann::ordered_json;

class UnknownTarget : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A deterministic objective at a fixed dimension.
class TargetFunction {
public:
    using Pointwise = std::function<double(std::span<const double>)>;
    using Batch = std::function<std::vector<double>(const Matrix&)>;

    TargetFunction(std::string id, std::size_t dim, Pointwise f, std::optional<double> known_min, Json metadata,
                   Batch batch = {});

    const std::string& id() const noexcept { return id_; }
    std::size_t dim() const noexcept { return dim_; }
    const std::optional<double>& known_min() const noexcept { return known_min_; }
    const Json& metadata() const noexcept { return metadata_; }

    double operator()(std::span<const double> x) const { return f_(x); }
    std::vector<double> evaluate(const Matrix& points) const;
    ela::BatchObjective objective() const;

private:
    std::string id_;
    std::size_t dim_;
    Pointwise f_;
    std::optional<double> known_min_;
    Json metadata_;
    Batch batch_;
};

inline constexpr std::size_t kClassicCount = 24;

/// Registered names in id order: classic/1 is "sphere", ..., classic/24.
const std::vector<std::string>& classic_names();

/// Accepts "classic/<k>", "<k>" or a registered name.
TargetFunction builtin(const std::string& id, std::size_t dim);

/// Location of the global minimum of a builtin at `dim`.
std::vector<double> builtin_optimum(const std::string& id, std::size_t dim);

/// All 24 classics in id order.
std::vector<TargetFunction> classic_suite(std::size_t dim);

/// Wraps a typed DSL program.
TargetFunction from_program(const std::string& id, const dsl::TypedProgram& program, std::size_t dim);

inline constexpr double kHybridEpsilon = 1e-12;
inline constexpr double kDefaultAlpha = 0.5;

/// exp(a ln(fA - minA + eps) + (1 - a) ln(fB - minB + eps)). Leaves known_min
/// unset.
TargetFunction hybrid(const TargetFunction& a, const TargetFunction& b, double alpha = kDefaultAlpha);

/// Hybrid k pairs member k with member (k mod size) + 1. Throws unless the
/// suite has 24 members, except when `generic` is set.
std::vector<TargetFunction> ring_suite(const std::vector<TargetFunction>& suite, double alpha = kDefaultAlpha,
                                       bool generic = false);

/// Named suites: "classic" and "ring" (classic ring at alpha 0.5).
std::vector<TargetFunction> named_suite(const std::string& name, std::size_t dim);

}  // namespace eotf::targets
