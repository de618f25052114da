#include "eotf/targets/target_spec.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "eotf/common/files.hpp"
#include "eotf/common/parallel.hpp"
#include "eotf/dsl/typed_program.hpp"
#include "eotf/ela/io.hpp"

namespace eotf::targets {

namespace {

const char* kind_name(SourceKind k) {
    switch (k) {
        case SourceKind::Builtin: return "builtin";
        case SourceKind::DslFile: return "dsl-file";
        case SourceKind::Hybrid: return "hybrid";
        case SourceKind::FeatureFile: return "feature-file";
    }
    return "";
}

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
    if (p.is_absolute() || base.empty()) return p;
    return base / p;
}

}  // namespace

std::vector<std::uint64_t> TargetSpec::consecutive_seeds(std::uint64_t base, std::size_t count) {
    std::vector<std::uint64_t> s(count);
    for (std::size_t i = 0; i < count; ++i) s[i] = base + i;
    return s;
}

void TargetSpec::validate() const {
    if (dim == 0) throw std::invalid_argument("target spec: dim must be positive");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("target spec: alpha must lie in [0, 1]");
    if (kind == SourceKind::FeatureFile) return;
    if (seeds.empty()) throw std::invalid_argument("target spec: seed list is empty");
    if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size())
        throw std::invalid_argument("target spec: seeds must be distinct");
}

TargetSpec target_spec_from_json(const Json& j, const std::filesystem::path& base_dir) {
    TargetSpec s;
    try {
        const std::string src = j.at("source").get<std::string>();
        if (src == "builtin") {
            s.kind = SourceKind::Builtin;
            s.id = j.at("id").get<std::string>();
        } else if (src == "dsl-file") {
            s.kind = SourceKind::DslFile;
            s.path = resolve(j.at("path").get<std::string>(), base_dir);
        } else if (src == "hybrid") {
            s.kind = SourceKind::Hybrid;
            s.hybrid_a = j.at("a").get<std::string>();
            s.hybrid_b = j.at("b").get<std::string>();
            s.alpha = j.value("alpha", kDefaultAlpha);
        } else if (src == "feature-file") {
            s.kind = SourceKind::FeatureFile;
            s.path = resolve(j.at("path").get<std::string>(), base_dir);
        } else {
            throw TargetError("target spec: unknown source '" + src + "'");
        }
        s.dim = j.at("dim").get<std::size_t>();
        s.suite = j.value("suite", std::string("classic"));
        if (j.contains("seeds")) {
            const Json& seeds = j["seeds"];
            if (seeds.is_array()) {
                s.seeds = seeds.get<std::vector<std::uint64_t>>();
            } else {
                s.seeds = TargetSpec::consecutive_seeds(seeds.value("base", std::uint64_t{0}),
                                                        seeds.value("count", std::size_t{100}));
            }
        } else {
            s.seeds = TargetSpec::consecutive_seeds(0);
        }
    } catch (const nlohmann::json::exception& e) {
        throw TargetError(std::string("malformed target spec: ") + e.what());
    }
    s.validate();
    return s;
}

Json to_json(const TargetSpec& s) {
    Json j = Json::object();
    j["source"] = kind_name(s.kind);
    switch (s.kind) {
        case SourceKind::Builtin: j["id"] = s.id; break;
        case SourceKind::DslFile:
        case SourceKind::FeatureFile: j["path"] = s.path.string(); break;
        case SourceKind::Hybrid:
            j["a"] = s.hybrid_a;
            j["b"] = s.hybrid_b;
            j["alpha"] = s.alpha;
            break;
    }
    j["dim"] = s.dim;
    j["suite"] = s.suite;
    if (s.kind != SourceKind::FeatureFile) j["seeds"] = s.seeds;
    return j;
}

TargetSpec load_target_spec(const std::filesystem::path& path) {
    Json j;
    try {
        j = Json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw TargetError(path.string() + ": " + e.what());
    }
    return target_spec_from_json(j, path.parent_path());
}

TargetFunction resolve_function(const TargetSpec& spec) {
    switch (spec.kind) {
        case SourceKind::Builtin: return builtin(spec.id, spec.dim);
        case SourceKind::Hybrid:
            return hybrid(builtin(spec.hybrid_a, spec.dim), builtin(spec.hybrid_b, spec.dim), spec.alpha);
        case SourceKind::DslFile:
            return from_program(spec.path.filename().string(), dsl::compile(read_text_file(spec.path)), spec.dim);
        case SourceKind::FeatureFile: break;
    }
    throw TargetError("a feature-file target has no objective function");
}

TargetResult compute_target(const TargetSpec& spec, const ela::Bounds& bounds, std::size_t workers) {
    spec.validate();
    if (bounds.dim != spec.dim)
        throw TargetError("bounds are for dim " + std::to_string(bounds.dim) + ", target is " +
                          std::to_string(spec.dim) + "-D");
    if (bounds.suite != spec.suite)
        throw TargetError("bounds are for suite '" + bounds.suite + "', target names '" + spec.suite + "'");
    TargetResult r;
    if (spec.kind == SourceKind::FeatureFile) {
        r.normalized = load_feature_file(spec.path, &bounds);
        return r;
    }
    const TargetFunction f = resolve_function(spec);
    const auto objective = f.objective();
    std::vector<ela::Landscape> samples(spec.seeds.size());
    parallel_for(samples.size(), workers, [&](std::size_t i) {
        samples[i] = ela::sample_landscape(objective, ela::SampleDesign::standard(spec.dim, spec.seeds[i]));
    });
    std::array<double, ela::kFeatureCount> sum{};
    for (const auto& l : samples) {
        if (!l.valid()) {
            ++r.samples_dropped;
            continue;
        }
        ++r.samples_used;
        for (std::size_t i = 0; i < ela::kFeatureCount; ++i) sum[i] += *l.features.values[i];
    }
    if (r.samples_used == 0 || r.samples_dropped * 10 > samples.size())
        throw TargetError("target " + f.id() + ": " + std::to_string(r.samples_dropped) + " of " +
                          std::to_string(samples.size()) + " samples are invalid (more than 10%)");
    for (std::size_t i = 0; i < ela::kFeatureCount; ++i)
        r.raw_mean.values[i] = sum[i] / static_cast<double>(r.samples_used);
    r.normalized = ela::normalize(r.raw_mean, bounds);
    return r;
}

ela::NormalizedVector compute_target_vector(const TargetSpec& spec, const ela::Bounds& bounds, std::size_t workers) {
    return compute_target(spec, bounds, workers).normalized;
}

ela::NormalizedVector feature_file_from_json(const Json& j, const ela::Bounds* bounds) {
    if (!j.is_object() || !j.contains("normalized") || !j["normalized"].is_boolean())
        throw TargetError("feature file needs a boolean 'normalized' field");
    ela::ElaVector v;
    try {
        v = ela::ela_vector_from_json(j);
    } catch (const std::exception& e) {
        throw TargetError(std::string("malformed feature file: ") + e.what());
    }
    if (!v.fully_defined()) throw TargetError("feature file: every feature needs a finite value");
    if (j["normalized"].get<bool>()) return ela::as_normalized(v);
    if (!bounds) throw TargetError("feature file holds raw values; bounds are needed to normalize them");
    return ela::normalize(v, *bounds);
}

ela::NormalizedVector load_feature_file(const std::filesystem::path& path, const ela::Bounds* bounds) {
    Json j;
    try {
        j = Json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw TargetError(path.string() + ": " + e.what());
    }
    return feature_file_from_json(j, bounds);
}

Json target_file_json(const TargetSpec& spec, const TargetResult& result) {
    Json j = ela::to_json(result.normalized);
    j["dim"] = spec.dim;
    j["suite"] = spec.suite;
    j["spec"] = to_json(spec);
    if (spec.kind != SourceKind::FeatureFile) {
        j["raw"] = ela::to_json(result.raw_mean);
        j["samples_used"] = result.samples_used;
        j["samples_dropped"] = result.samples_dropped;
    }
    return j;
}

ela::NormalizedVector load_target(const std::filesystem::path& path, const ela::Bounds& bounds, std::size_t workers) {
    Json j;
    try {
        j = Json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw TargetError(path.string() + ": " + e.what());
    }
    if (j.is_object() && j.contains("normalized")) return feature_file_from_json(j, &bounds);
    return compute_target_vector(target_spec_from_json(j, path.parent_path()), bounds, workers);
}

}  // namespace eotf::targets
