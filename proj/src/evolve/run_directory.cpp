#include "eotf/evolve/run_directory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "eotf/common/files.hpp"

namespace eotf::evolve {

namespace {

std::string format_fitness(double v) {
    if (!std::isfinite(v)) return "inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

RunDirectory::RunDirectory(std::filesystem::path root, const Json& config, const Json& target, const Json& bounds)
    : root_(std::move(root)) {
    std::filesystem::create_directories(root_ / "candidates");
    write_text_file(root_ / "config.json", config.dump(2) + "\n");
    write_text_file(root_ / "target.json", target.dump(2) + "\n");
    write_text_file(root_ / "bounds.json", bounds.dump(2) + "\n");
    log_.open(root_ / "log.jsonl", std::ios::binary | std::ios::trunc);
    if (!log_) throw std::runtime_error("cannot write " + (root_ / "log.jsonl").string());
}

void RunDirectory::on_query(const Json& record) {
    log_ << record.dump() << '\n';
    log_.flush();
}

void RunDirectory::on_candidate(const Candidate& c) {
    const std::string stem = std::to_string(c.query_index);
    std::string src = c.source;
    if (!src.empty() && src.back() != '\n') src += '\n';
    write_text_file(root_ / "candidates" / (stem + ".fn"), src);
    write_text_file(root_ / "candidates" / (stem + ".meta.json"), candidate_meta(c).dump(2) + "\n");
}

void RunDirectory::finish(const Archive& archive) {
    log_.close();
    write_text_file(root_ / "trajectory.csv", trajectory_csv(archive));
}

std::string trajectory_csv(const Archive& archive) {
    std::string out = "query_index,best_fitness\n";
    for (std::size_t i = 0; i < archive.trajectory.size(); ++i)
        out += std::to_string(i + 1) + "," + format_fitness(archive.trajectory[i]) + "\n";
    return out;
}

std::vector<StoredCandidate> load_candidates(const std::filesystem::path& run_dir) {
    const auto dir = run_dir / "candidates";
    if (!std::filesystem::is_directory(dir)) throw std::runtime_error(run_dir.string() + " has no candidates/");
    std::vector<StoredCandidate> out;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        const std::string suffix = ".meta.json";
        if (name.size() <= suffix.size() || name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0)
            continue;
        StoredCandidate c;
        c.meta = Json::parse(read_text_file(entry.path()));
        c.query_index = c.meta.at("query_index").get<std::size_t>();
        c.source = read_text_file(dir / (std::to_string(c.query_index) + ".fn"));
        out.push_back(std::move(c));
    }
    auto key = [](const StoredCandidate& c) {
        const Json& f = c.meta["fitness"];
        return f.is_number() ? f.get<double>() : INFINITY;
    };
    std::sort(out.begin(), out.end(), [&](const StoredCandidate& a, const StoredCandidate& b) {
        if (key(a) != key(b)) return key(a) < key(b);
        return a.query_index < b.query_index;
    });
    return out;
}

StoredCandidate load_best(const std::filesystem::path& run_dir) {
    auto all = load_candidates(run_dir);
    if (all.empty() || !all.front().meta.value("valid", false))
        throw std::runtime_error(run_dir.string() + " has no valid candidate");
    return all.front();
}

}  // namespace eotf::evolve
