#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "conflictforge/errors.hpp"

namespace conflictforge::gateway {

struct CompletionRequest {
    std::string model;
    std::string prompt;  // single user message
    double temperature = 0.0;
    int max_tokens = 1024;
    std::string cache_salt;  // repeat runs salt this to bypass the cache
};

struct CompletionResult {
    std::string text;
    int latency_ms = 0;
    int attempt_count = 1;
    bool cached = false;
};

// Injectable clock so retry backoff and the rate limiter are testable
// without real waiting.
class Clock {
public:
    virtual ~Clock() = default;
    virtual std::chrono::steady_clock::time_point now() = 0;
    virtual void sleep_for(std::chrono::milliseconds d) = 0;
};

class SystemClock : public Clock {
public:
    std::chrono::steady_clock::time_point now() override {
        return std::chrono::steady_clock::now();
    }
    void sleep_for(std::chrono::milliseconds d) override;
};

// Advances instantly on sleep; never blocks.
class VirtualClock : public Clock {
public:
    std::chrono::steady_clock::time_point now() override {
        std::lock_guard lock(mu_);
        return t_;
    }
    void sleep_for(std::chrono::milliseconds d) override {
        std::lock_guard lock(mu_);
        t_ += d;
    }

private:
    std::mutex mu_;
    std::chrono::steady_clock::time_point t_{};
};

// Sliding one-second window: at most `per_second` dispatches in any window.
class RateLimiter {
public:
    RateLimiter(int per_second, std::shared_ptr<Clock> clock)
        : per_second_(per_second), clock_(std::move(clock)) {}

    void acquire();

private:
    int per_second_;
    std::shared_ptr<Clock> clock_;
    std::mutex mu_;
    std::deque<std::chrono::steady_clock::time_point> dispatched_;
};

class TextBackend {
public:
    virtual ~TextBackend() = default;
    virtual std::string complete_raw(const CompletionRequest& req) = 0;
    virtual std::string id() const = 0;
};

// One scripted rule: a literal-substring or prompt-hash matcher plus a
// response template. Templates may use {prompt}, {tail:ANCHOR} (trimmed text
// after the first ANCHOR), {sentence:ANCHOR} (first sentence after ANCHOR)
// and {filler:ANCHOR} (K deterministic filler words, K = first integer after
// ANCHOR in the prompt).
struct MockRule {
    std::optional<std::string> contains;
    std::optional<std::string> prompt_sha256;
    std::string response;
};

// Deterministic scripted backend. First matching rule wins; unmatched prompts
// get the default response or a ScriptGapError naming the prompt hash.
// Performs no network I/O.
class MockBackend : public TextBackend {
public:
    MockBackend() = default;
    MockBackend(std::vector<MockRule> rules, std::optional<std::string> default_response);

    // Rules answering every generation and validation prompt, used for
    // offline dataset builds and demos.
    static std::shared_ptr<MockBackend> algorithm_script();
    static std::shared_ptr<MockBackend> from_file(const std::filesystem::path& path);

    void add_rule(MockRule rule);
    // Test hook evaluated before declarative rules; return nullopt to pass.
    void add_function_rule(std::function<std::optional<std::string>(const std::string&)> fn);
    void set_default_response(std::string response);

    // Injects n transient failures (thrown as retryable GatewayError) before
    // the next successful completion.
    void fail_next(int n, int status = 503);

    std::uint64_t invocations() const { return invocations_.load(); }
    void reset_invocations() { invocations_ = 0; }

    std::string complete_raw(const CompletionRequest& req) override;
    std::string id() const override { return "mock"; }

private:
    std::vector<std::function<std::optional<std::string>(const std::string&)>> fn_rules_;
    std::vector<MockRule> rules_;
    std::optional<std::string> default_response_;
    std::atomic<std::uint64_t> invocations_{0};
    std::atomic<int> pending_failures_{0};
    int failure_status_ = 503;
    mutable std::mutex mu_;
};

// JSON-over-HTTP chat-completion endpoint. Request shape:
//   {model, messages:[{role:"user", content}], temperature, max_tokens}
// Response text is the first choice's message content. 429/5xx retryable,
// other 4xx fail immediately.
class HttpBackend : public TextBackend {
public:
    HttpBackend(std::string endpoint_url, std::string api_key,
                int timeout_seconds = 120);

    std::string complete_raw(const CompletionRequest& req) override;
    std::string id() const override { return "http:" + endpoint_url_; }

private:
    std::string endpoint_url_;
    std::string api_key_;
    int timeout_seconds_;
};

enum class CacheMode { off, memory, disk };

struct GatewayOptions {
    int max_retries = 3;
    std::chrono::milliseconds backoff_base{200};
    int rate_limit_per_second = 0;  // 0 = unlimited
    int max_in_flight = 0;          // 0 = unlimited
    CacheMode cache = CacheMode::off;
    std::filesystem::path cache_dir;
};

// Uniform completion surface: caching, rate limiting, bounded in-flight
// requests and retry with exponential backoff around any TextBackend.
// Safe to call from many workers concurrently.
class Gateway {
public:
    Gateway(std::shared_ptr<TextBackend> backend, GatewayOptions options = {},
            std::shared_ptr<Clock> clock = nullptr);

    CompletionResult complete(const CompletionRequest& req);

    // Stable digest of (backend id, model, temperature, max_tokens, salt,
    // prompt bytes); the cache key and the mock hash-rule key.
    std::string request_digest(const CompletionRequest& req) const;

    TextBackend& backend() { return *backend_; }

private:
    std::optional<std::string> cache_lookup(const std::string& key);
    void cache_store(const std::string& key, const CompletionRequest& req,
                     const std::string& text);

    std::shared_ptr<TextBackend> backend_;
    GatewayOptions options_;
    std::shared_ptr<Clock> clock_;
    std::unique_ptr<RateLimiter> limiter_;
    std::mutex cache_mu_;
    std::map<std::string, std::string> memory_cache_;
    std::mutex inflight_mu_;
    std::condition_variable_any inflight_cv_;
    int in_flight_ = 0;
};

// Digest of a bare prompt string, the key used by mock hash rules and
// script-gap errors.
std::string prompt_digest(const std::string& prompt);

}  // namespace conflictforge::gateway
