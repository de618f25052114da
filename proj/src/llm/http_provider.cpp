#include <atomic>
#include <cstdlib>
#include <thread>

#include "httplib.h"

#include "eotf/llm/provider.hpp"

namespace eotf::llm {

namespace {

struct Endpoint {
    std::string origin;  // scheme://host[:port]
    std::string prefix;  // path without trailing slash
};

Endpoint split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw std::invalid_argument("base_url needs a scheme: " + url);
    const std::string scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") throw std::invalid_argument("base_url scheme must be http or https");
    const auto path_start = url.find('/', scheme_end + 3);
    Endpoint e;
    e.origin = url.substr(0, path_start);
    if (e.origin.size() <= scheme_end + 3) throw std::invalid_argument("base_url has no host: " + url);
    if (path_start != std::string::npos) e.prefix = url.substr(path_start);
    while (!e.prefix.empty() && e.prefix.back() == '/') e.prefix.pop_back();
    return e;
}

}  // namespace

void ProviderConfig::validate() const {
    if (retries < 0) throw std::invalid_argument("provider retries must be >= 0");
    if (!(timeout_seconds > 0.0)) throw std::invalid_argument("provider timeout must be positive");
    if (max_in_flight == 0) throw std::invalid_argument("provider max_in_flight must be positive");
    const Endpoint e = split_url(base_url);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (e.origin.rfind("https", 0) == 0) throw std::invalid_argument("this build has no TLS support for " + base_url);
#endif
}

nlohmann::ordered_json ProviderConfig::to_json() const {
    return {{"base_url", base_url},
            {"model", model},
            {"temperature", temperature},
            {"max_tokens", max_tokens},
            {"timeout_seconds", timeout_seconds},
            {"retries", retries},
            {"retry_backoff_ms", retry_backoff_ms},
            {"api_key_env", api_key_env},
            {"max_in_flight", max_in_flight},
            {"min_interval_ms", min_interval_ms}};
}

ProviderConfig ProviderConfig::from_json(const nlohmann::ordered_json& j) {
    ProviderConfig c;
    c.base_url = j.value("base_url", c.base_url);
    c.model = j.value("model", c.model);
    c.temperature = j.value("temperature", c.temperature);
    c.max_tokens = j.value("max_tokens", c.max_tokens);
    c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
    c.retries = j.value("retries", c.retries);
    c.retry_backoff_ms = j.value("retry_backoff_ms", c.retry_backoff_ms);
    c.api_key_env = j.value("api_key_env", c.api_key_env);
    c.max_in_flight = j.value("max_in_flight", c.max_in_flight);
    c.min_interval_ms = j.value("min_interval_ms", c.min_interval_ms);
    return c;
}

struct HttpProvider::Impl {
    ProviderConfig cfg;
    Endpoint endpoint;
    std::string key;
    std::mutex mutex;
    std::condition_variable slot_free;
    std::size_t in_flight = 0;
    std::chrono::steady_clock::time_point next_allowed{};
    std::atomic<std::size_t> sent{0};

    void pace() {
        std::unique_lock lock(mutex);
        const auto now = std::chrono::steady_clock::now();
        const auto at = std::max(now, next_allowed);
        next_allowed = at + std::chrono::milliseconds(cfg.min_interval_ms);
        lock.unlock();
        std::this_thread::sleep_until(at);
    }
};

HttpProvider::HttpProvider(ProviderConfig config) : impl_(std::make_unique<Impl>()) {
    config.validate();
    impl_->cfg = std::move(config);
    impl_->endpoint = split_url(impl_->cfg.base_url);
    if (const char* k = std::getenv(impl_->cfg.api_key_env.c_str())) impl_->key = k;
}

HttpProvider::~HttpProvider() = default;

std::string HttpProvider::describe() const { return "http " + impl_->cfg.base_url + " model=" + impl_->cfg.model; }

std::size_t HttpProvider::requests_sent() const { return impl_->sent.load(); }

Completion HttpProvider::complete(const std::string& prompt) {
    Impl& s = *impl_;
    {
        std::unique_lock lock(s.mutex);
        s.slot_free.wait(lock, [&] { return s.in_flight < s.cfg.max_in_flight; });
        ++s.in_flight;
    }
    struct Release {
        Impl& s;
        ~Release() {
            std::lock_guard lock(s.mutex);
            --s.in_flight;
            s.slot_free.notify_one();
        }
    } release{s};

    nlohmann::json body{{"model", s.cfg.model},
                        {"messages", {{{"role", "user"}, {"content", prompt}}}},
                        {"temperature", s.cfg.temperature},
                        {"max_tokens", s.cfg.max_tokens}};
    const std::string payload = body.dump();
    httplib::Headers headers;
    if (!s.key.empty()) headers.emplace("Authorization", "Bearer " + s.key);
    const std::string path = s.endpoint.prefix + "/chat/completions";
    const auto secs = static_cast<time_t>(s.cfg.timeout_seconds);
    const auto usecs = static_cast<time_t>((s.cfg.timeout_seconds - static_cast<double>(secs)) * 1e6);

    std::string last_error;
    for (int attempt = 0; attempt <= s.cfg.retries; ++attempt) {
        if (attempt > 0) {
            const int backoff = s.cfg.retry_backoff_ms << std::min(attempt - 1, 4);
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
        }
        s.pace();
        httplib::Client cli(s.endpoint.origin);
        cli.set_connection_timeout(secs, usecs);
        cli.set_read_timeout(secs, usecs);
        cli.set_write_timeout(secs, usecs);
        ++s.sent;
        const auto res = cli.Post(path, headers, payload, "application/json");
        if (!res) {
            last_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status < 200 || res->status >= 300)
            throw ProviderError("HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 300));
        try {
            const auto j = nlohmann::json::parse(res->body);
            Completion c;
            c.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
            if (j.contains("usage") && j["usage"].is_object()) {
                const auto& u = j["usage"];
                if (u.contains("prompt_tokens")) c.prompt_tokens = u["prompt_tokens"].get<long>();
                if (u.contains("completion_tokens")) c.completion_tokens = u["completion_tokens"].get<long>();
            }
            return c;
        } catch (const nlohmann::json::exception& e) {
            throw ProviderError(std::string("unexpected chat completion payload: ") + e.what());
        }
    }
    throw ProviderError("request to " + s.cfg.base_url + " failed after " + std::to_string(s.cfg.retries + 1) +
                        " attempts: " + last_error);
}

}  // namespace eotf::llm
