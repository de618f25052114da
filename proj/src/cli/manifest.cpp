#include "eotf/cli/manifest.hpp"

#include <chrono>
#include <ctime>
#include <stdexcept>

#include "eotf/common/files.hpp"
#include "eotf/common/hash.hpp"

namespace eotf::cli {

Json RunManifest::to_json() const {
    Json in = Json::array();
    for (const auto& [path, hash] : inputs) in.push_back({{"path", path}, {"fnv1a64", hash}});
    return {{"version", version},          {"subcommand", subcommand},   {"config", config},
            {"config_hash", config_hash(config)}, {"inputs", in},        {"started_at", started_at},
            {"finished_at", finished_at},  {"status", status}};
}

RunManifest RunManifest::from_json(const Json& j) {
    RunManifest m;
    m.version = j.at("version").get<std::string>();
    m.subcommand = j.at("subcommand").get<std::string>();
    m.config = j.at("config");
    for (const auto& e : j.value("inputs", Json::array()))
        m.inputs.emplace_back(e.at("path").get<std::string>(), e.at("fnv1a64").get<std::string>());
    m.started_at = j.value("started_at", "");
    m.finished_at = j.value("finished_at", "");
    m.status = j.value("status", "");
    if (j.contains("config_hash") && j["config_hash"] != config_hash(m.config))
        throw std::runtime_error("manifest config_hash does not match its config");
    return m;
}

std::string config_hash(const Json& config) { return to_hex(fnv1a64(config.dump())); }

std::string hash_file(const std::filesystem::path& path) { return to_hex(fnv1a64(read_text_file(path))); }

std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ManifestWriter::ManifestWriter(std::filesystem::path path, RunManifest manifest)
    : path_(std::move(path)), manifest_(std::move(manifest)) {
    if (manifest_.started_at.empty()) manifest_.started_at = utc_timestamp();
    write();
}

void ManifestWriter::finish(const std::string& status) {
    manifest_.status = status;
    manifest_.finished_at = utc_timestamp();
    write();
}

void ManifestWriter::write() const { write_text_file(path_, manifest_.to_json().dump(2) + "\n"); }

Json load_config_file(const std::filesystem::path& path) {
    Json j;
    try {
        j = Json::parse(read_text_file(path));
    } catch (const Json::parse_error& e) {
        throw std::runtime_error("config " + path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw std::runtime_error("config " + path.string() + " is not a JSON object");
    if (j.contains("subcommand") && j.contains("config")) return RunManifest::from_json(j).config;
    return j;
}

}  // namespace eotf::cli
