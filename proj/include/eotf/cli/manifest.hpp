#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace eotf::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

struct RunManifest {
    std::string version = kVersion;
    std::string subcommand;
    /// Fully resolved configuration (defaults < config file < flags).
    Json config = Json::object();
    /// (path, FNV-1a hex of contents).
    std::vector<std::pair<std::string, std::string>> inputs;
    std::string started_at;
    std::string finished_at;
    std::string status = "running";

    Json to_json() const;
    static RunManifest from_json(const Json& j);
};

/// FNV-1a hex of config.dump(); stored as "config_hash".
std::string config_hash(const Json& config);

std::string hash_file(const std::filesystem::path& path);

/// ISO-8601 UTC with seconds.
std::string utc_timestamp();

/// Writes the manifest on construction and again from finish().
class ManifestWriter {
public:
    ManifestWriter(std::filesystem::path path, RunManifest manifest);
    void finish(const std::string& status);
    const RunManifest& manifest() const noexcept { return manifest_; }

private:
    void write() const;

    std::filesystem::path path_;
    RunManifest manifest_;
};

/// A config file is either a plain object or a manifest, whose "config"
/// member is used; replaying a manifest therefore reproduces its run.
Json load_config_file(const std::filesystem::path& path);

}  // namespace eotf::cli
