#pragma once

#include <filesystem>
#include <fstream>

#include "eotf/evolve/search.hpp"

namespace eotf::evolve {

/// Writes config.json, target.json, bounds.json up front, log.jsonl and
/// candidates/ while the search runs, and trajectory.csv at the end.
class RunDirectory : public SearchObserver {
public:
    RunDirectory(std::filesystem::path root, const Json& config, const Json& target, const Json& bounds);

    void on_query(const Json& record) override;
    void on_candidate(const Candidate& c) override;
    void finish(const Archive& archive);

    const std::filesystem::path& root() const noexcept { return root_; }

private:
    std::filesystem::path root_;
    std::ofstream log_;
};

std::string trajectory_csv(const Archive& archive);

/// Reloads candidate programs from a finished run directory, best first.
struct StoredCandidate {
    std::size_t query_index = 0;
    std::string source;
    Json meta;
};
std::vector<StoredCandidate> load_candidates(const std::filesystem::path& run_dir);

/// The lowest-fitness valid candidate of a run directory.
StoredCandidate load_best(const std::filesystem::path& run_dir);

}  // namespace eotf::evolve
