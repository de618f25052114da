#include <stdexcept>

#include "eotf/common/files.hpp"
#include "eotf/llm/provider.hpp"

namespace eotf::llm {

ScriptedProvider::ScriptedProvider(std::vector<std::string> responses) : sequence_(std::move(responses)) {}

ScriptedProvider::ScriptedProvider(ScriptedProvider&& other) noexcept
    : rules_(std::move(other.rules_)), sequence_(std::move(other.sequence_)), cursor_(other.cursor_) {}

ScriptedProvider ScriptedProvider::from_json(const nlohmann::json& t) {
    try {
        if (t.is_array()) return ScriptedProvider(t.get<std::vector<std::string>>());
        if (!t.is_object()) throw std::runtime_error("transcript must be an array or an object");
        ScriptedProvider p;
        for (const auto& r : t.value("rules", nlohmann::json::array()))
            p.rules_.push_back({r.at("when_contains").get<std::string>(), r.at("response").get<std::string>()});
        p.sequence_ = t.value("default", std::vector<std::string>{});
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("malformed transcript: ") + e.what());
    }
}

ScriptedProvider ScriptedProvider::from_file(const std::filesystem::path& path) {
    try {
        return from_json(nlohmann::json::parse(read_text_file(path)));
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

Completion ScriptedProvider::complete(const std::string& prompt) {
    std::lock_guard lock(mutex_);
    for (const auto& r : rules_)
        if (prompt.find(r.when_contains) != std::string::npos) return {r.response, {}, {}};
    if (cursor_ >= sequence_.size())
        throw TranscriptExhausted("transcript exhausted after " + std::to_string(cursor_) + " responses");
    return {sequence_[cursor_++], {}, {}};
}

std::size_t ScriptedProvider::consumed() const {
    std::lock_guard lock(mutex_);
    return cursor_;
}

std::size_t ScriptedProvider::remaining() const {
    std::lock_guard lock(mutex_);
    return sequence_.size() - cursor_;
}

}  // namespace eotf::llm
