#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace eotf::llm {

struct Completion {
    std::string text;
    std::optional<long> prompt_tokens;
    std::optional<long> completion_tokens;
};

/// Transport or protocol failure after the provider's own retries.
class ProviderError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A scripted provider ran out of responses. Not recoverable.
class TranscriptExhausted : public ProviderError {
public:
    using ProviderError::ProviderError;
};

class Provider {
public:
    virtual ~Provider() = default;
    virtual Completion complete(const std::string& prompt) = 0;
    virtual std::string describe() const = 0;
};

/// Replays canned responses. A transcript is either a JSON array of strings
/// (strict sequence) or {"rules": [{"when_contains": s, "response": r}],
/// "default": [...]}, where the first rule whose text occurs in the prompt
/// answers it and anything else consumes the default sequence.
class ScriptedProvider : public Provider {
public:
    explicit ScriptedProvider(std::vector<std::string> responses);
    ScriptedProvider(ScriptedProvider&& other) noexcept;
    static ScriptedProvider from_json(const nlohmann::json& transcript);
    static ScriptedProvider from_file(const std::filesystem::path& path);

    Completion complete(const std::string& prompt) override;
    std::string describe() const override { return "scripted"; }

    std::size_t consumed() const;
    std::size_t remaining() const;

private:
    struct Rule {
        std::string when_contains;
        std::string response;
    };
    ScriptedProvider() = default;

    std::vector<Rule> rules_;
    std::vector<std::string> sequence_;
    std::size_t cursor_ = 0;
    mutable std::mutex mutex_;
};

struct ProviderConfig {
    std::string base_url = "https://api.openai.com/v1";
    std::string model = "gpt-4o-mini";
    double temperature = 1.0;
    int max_tokens = 2048;
    double timeout_seconds = 120.0;
    /// Transport retries after the first attempt.
    int retries = 2;
    int retry_backoff_ms = 500;
    std::string api_key_env = "EOTF_API_KEY";
    std::size_t max_in_flight = 4;
    int min_interval_ms = 0;

    /// Throws std::invalid_argument on retries < 0, timeout <= 0 or an
    /// unparseable base URL.
    void validate() const;
    nlohmann::ordered_json to_json() const;
    /// Missing keys keep their defaults.
    static ProviderConfig from_json(const nlohmann::ordered_json& j);
};

/// OpenAI-compatible chat completion over HTTP(S). Each call is a single
/// user turn. The key is read from the environment variable named in the
/// config at construction; it is never logged.
class HttpProvider : public Provider {
public:
    explicit HttpProvider(ProviderConfig config);
    ~HttpProvider() override;

    Completion complete(const std::string& prompt) override;
    std::string describe() const override;

    /// Number of HTTP requests issued, retries included.
    std::size_t requests_sent() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace eotf::llm
