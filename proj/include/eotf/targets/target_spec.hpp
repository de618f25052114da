#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "eotf/ela/normalize.hpp"
#include "eotf/targets/target_function.hpp"

namespace eotf::targets {

enum class SourceKind { Builtin, DslFile, Hybrid, FeatureFile };

struct TargetSpec {
    SourceKind kind = SourceKind::Builtin;
    std::string id;            // builtin
    std::filesystem::path path;  // dsl-file, feature-file
    std::string hybrid_a, hybrid_b;
    double alpha = kDefaultAlpha;
    std::size_t dim = 2;
    std::string suite = "classic";
    std::vector<std::uint64_t> seeds;

    /// 100 consecutive seeds starting at base.
    static std::vector<std::uint64_t> consecutive_seeds(std::uint64_t base, std::size_t count = 100);

    /// Throws std::invalid_argument on alpha outside [0, 1], dim 0, or empty
    /// or repeated seeds (feature-file specs need no seeds).
    void validate() const;
};

class TargetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Relative paths inside the JSON resolve against `base_dir`.
TargetSpec target_spec_from_json(const Json& j, const std::filesystem::path& base_dir = {});
Json to_json(const TargetSpec& spec);
TargetSpec load_target_spec(const std::filesystem::path& path);

/// Builds the objective named by a builtin, dsl-file or hybrid spec.
TargetFunction resolve_function(const TargetSpec& spec);

struct TargetResult {
    ela::NormalizedVector normalized;
    ela::ElaVector raw_mean;
    std::size_t samples_used = 0;
    std::size_t samples_dropped = 0;
};

/// Raw features are averaged over spec.seeds, then normalized. More than
/// 10% dropped samples is a TargetError.
TargetResult compute_target(const TargetSpec& spec, const ela::Bounds& bounds, std::size_t workers = 1);

ela::NormalizedVector compute_target_vector(const TargetSpec& spec, const ela::Bounds& bounds,
                                            std::size_t workers = 1);

/// Feature file: ElaVector JSON plus "normalized". Unnormalized files are
/// normalized with `bounds`, which must then be given.
ela::NormalizedVector load_feature_file(const std::filesystem::path& path, const ela::Bounds* bounds);
ela::NormalizedVector feature_file_from_json(const Json& j, const ela::Bounds* bounds);

/// target.json as written by the target command: a normalized feature file
/// with the spec and the raw mean alongside.
Json target_file_json(const TargetSpec& spec, const TargetResult& result);

/// Accepts either a feature file or a TargetSpec.
ela::NormalizedVector load_target(const std::filesystem::path& path, const ela::Bounds& bounds,
                                  std::size_t workers = 1);

}  // namespace eotf::targets
