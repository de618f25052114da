#include "eotf/ela/io.hpp"

#include <stdexcept>

namespace eotf::ela {

Json to_json(const ElaVector& v) {
    Json j = Json::object();
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        const std::string key(kFeatureNames[i]);
        if (v.values[i])
            j[key] = *v.values[i];
        else
            j[key] = nullptr;
    }
    return j;
}

ElaVector ela_vector_from_json(const Json& j) {
    if (!j.is_object()) throw std::runtime_error("feature vector must be a JSON object");
    ElaVector v;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        const auto it = j.find(std::string(kFeatureNames[i]));
        if (it == j.end() || it->is_null()) continue;
        if (!it->is_number()) throw std::runtime_error("feature " + std::string(kFeatureNames[i]) + " is not a number");
        v.values[i] = it->get<double>();
    }
    return v;
}

Json to_json(const NormalizedVector& v) {
    Json j = Json::object();
    j["normalized"] = true;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        const std::string key(kFeatureNames[i]);
        if (v.defined[i])
            j[key] = v.values[i];
        else
            j[key] = nullptr;
    }
    Json degenerate = Json::array();
    for (std::size_t i = 0; i < kFeatureCount; ++i)
        if (v.degenerate[i]) degenerate.push_back(std::string(kFeatureNames[i]));
    j["degenerate"] = degenerate;
    return j;
}

Json to_json(const Bounds& b) {
    Json j = Json::object();
    j["suite"] = b.suite;
    j["dim"] = b.dim;
    j["seeds"] = b.seeds;
    j["samples_used"] = b.samples_used;
    Json f = Json::object();
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        f[std::string(kFeatureNames[i])] = Json{{"min", b.ranges[i].min}, {"max", b.ranges[i].max}};
    }
    j["features"] = f;
    return j;
}

Bounds bounds_from_json(const Json& j) {
    Bounds b;
    try {
        b.suite = j.at("suite").get<std::string>();
        b.dim = j.at("dim").get<std::size_t>();
        b.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        b.samples_used = j.value("samples_used", std::size_t{0});
        const Json& f = j.at("features");
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            const Json& r = f.at(std::string(kFeatureNames[i]));
            b.ranges[i].min = r.at("min").get<double>();
            b.ranges[i].max = r.at("max").get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("malformed bounds file: ") + e.what());
    }
    return b;
}

}  // namespace eotf::ela
