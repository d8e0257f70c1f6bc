#include "conflictforge/llmgateway.hpp"

#include <cctype>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "conflictforge/digest.hpp"

namespace conflictforge::gateway {

namespace {

using nlohmann::json;

std::string strip_trailing_ws(std::string s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.pop_back();
    return s;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

// Deterministic filler vocabulary for scripted paragraph responses.
const char* kFiller[] = {"the",      "survey",  "records", "an",
                         "additional", "finding", "that",    "reviewers",
                         "should",   "weigh",   "against", "earlier",
                         "accounts"};

std::string filler_words(int count) {
    std::string out;
    for (int i = 0; i < count; ++i) {
        if (i) out.push_back(' ');
        out += kFiller[i % (sizeof(kFiller) / sizeof(kFiller[0]))];
    }
    return out;
}

std::string text_after(const std::string& prompt, const std::string& anchor) {
    const auto pos = prompt.find(anchor);
    if (pos == std::string::npos) return "";
    return trim(prompt.substr(pos + anchor.size()));
}

std::string first_sentence_after(const std::string& prompt,
                                 const std::string& anchor) {
    const std::string tail = text_after(prompt, anchor);
    const auto stop = tail.find_first_of(".?!");
    if (stop == std::string::npos) return tail;
    std::size_t end = stop;
    while (end < tail.size() &&
           (tail[end] == '.' || tail[end] == '?' || tail[end] == '!'))
        ++end;
    return trim(tail.substr(0, end));
}

int first_int_after(const std::string& prompt, const std::string& anchor) {
    const std::string tail = text_after(prompt, anchor);
    const auto digit = tail.find_first_of("0123456789");
    if (digit == std::string::npos) return 0;
    return std::atoi(tail.c_str() + digit);
}

// Expands {prompt} / {tail:A} / {sentence:A} / {filler:A} directives in a
// scripted response. Anything unrecognized is left verbatim.
std::string expand_response(const std::string& tpl, const std::string& prompt) {
    std::string out;
    std::size_t i = 0;
    while (i < tpl.size()) {
        if (tpl[i] != '{') {
            out.push_back(tpl[i++]);
            continue;
        }
        const auto close = tpl.find('}', i + 1);
        if (close == std::string::npos) {
            out.append(tpl, i, std::string::npos);
            break;
        }
        const std::string directive = tpl.substr(i + 1, close - i - 1);
        if (directive == "prompt") {
            out += prompt;
        } else if (directive.rfind("tail:", 0) == 0) {
            out += text_after(prompt, directive.substr(5));
        } else if (directive.rfind("sentence:", 0) == 0) {
            out += first_sentence_after(prompt, directive.substr(9));
        } else if (directive.rfind("filler:", 0) == 0) {
            out += filler_words(first_int_after(prompt, directive.substr(7)));
        } else {
            out.append(tpl, i, close - i + 1);
        }
        i = close + 1;
    }
    return out;
}

}  // namespace

std::string prompt_digest(const std::string& prompt) {
    return sha256_hex(prompt);
}

void SystemClock::sleep_for(std::chrono::milliseconds d) {
    std::this_thread::sleep_for(d);
}

void RateLimiter::acquire() {
    using namespace std::chrono_literals;
    if (per_second_ <= 0) return;
    std::lock_guard lock(mu_);
    for (;;) {
        const auto now = clock_->now();
        while (!dispatched_.empty() && dispatched_.front() <= now - 1s)
            dispatched_.pop_front();
        if (static_cast<int>(dispatched_.size()) < per_second_) {
            dispatched_.push_back(now);
            return;
        }
        const auto wait = std::chrono::duration_cast<std::chrono::milliseconds>(
                              dispatched_.front() + 1s - now) +
                          1ms;
        clock_->sleep_for(wait);
    }
}

MockBackend::MockBackend(std::vector<MockRule> rules,
                         std::optional<std::string> default_response)
    : rules_(std::move(rules)), default_response_(std::move(default_response)) {}

void MockBackend::add_rule(MockRule rule) {
    std::lock_guard lock(mu_);
    rules_.push_back(std::move(rule));
}

void MockBackend::add_function_rule(
    std::function<std::optional<std::string>(const std::string&)> fn) {
    std::lock_guard lock(mu_);
    fn_rules_.push_back(std::move(fn));
}

void MockBackend::set_default_response(std::string response) {
    std::lock_guard lock(mu_);
    default_response_ = std::move(response);
}

void MockBackend::fail_next(int n, int status) {
    pending_failures_ = n;
    failure_status_ = status;
}

std::string MockBackend::complete_raw(const CompletionRequest& req) {
    invocations_.fetch_add(1);
    int pending = pending_failures_.load();
    while (pending > 0) {
        if (pending_failures_.compare_exchange_weak(pending, pending - 1)) {
            const bool retryable =
                failure_status_ == 429 || failure_status_ >= 500 ||
                failure_status_ == 0;
            throw GatewayError("injected mock failure", failure_status_, 1,
                               retryable);
        }
    }

    std::lock_guard lock(mu_);
    for (const auto& fn : fn_rules_) {
        if (auto resp = fn(req.prompt)) return *resp;
    }
    std::optional<std::string> hash;  // computed lazily, most rules are substring
    for (const auto& rule : rules_) {
        if (rule.contains &&
            req.prompt.find(*rule.contains) != std::string::npos)
            return expand_response(rule.response, req.prompt);
        if (rule.prompt_sha256) {
            if (!hash) hash = prompt_digest(req.prompt);
            if (*hash == *rule.prompt_sha256)
                return expand_response(rule.response, req.prompt);
        }
    }
    if (default_response_) return expand_response(*default_response_, req.prompt);
    throw ScriptGapError(prompt_digest(req.prompt));
}

std::shared_ptr<MockBackend> MockBackend::algorithm_script() {
    std::vector<MockRule> rules;
    rules.push_back({"important sentence from the given document", std::nullopt,
                     "<sentence>{sentence:Here is the document: }</sentence>"});
    rules.push_back(
        {"Modify the given statement to suggest otherwise", std::nullopt,
         "<statement>Contrary to the usual account, it is not true that "
         "{tail:Here is the statement: }</statement>"});
    rules.push_back({"Generate a paragraph of", std::nullopt,
                     "<paragraph>{filler:Generate a paragraph of}</paragraph>"});
    rules.push_back(
        {"Generate a set of three short documents", std::nullopt,
         "<document1>{sentence:Here is the topic: } One chronicle describes it "
         "as the area's most celebrated undertaking.</document1> "
         "<document2>{sentence:Here is the topic: } A separate chronicle "
         "praises an entirely different undertaking as the area's most "
         "celebrated.</document2> "
         "<document3>Local custom holds that only a single undertaking may "
         "ever carry the title of most celebrated at one time.</document3>"});
    rules.push_back({"Do the documents contain conflicting information?",
                     std::nullopt, "no"});
    rules.push_back({"predict the type of", std::nullopt,
                     "<type>pair contradiction</type>"});
    rules.push_back({"contain the conflicting information", std::nullopt,
                     "<documents>1, 2</documents>"});
    return std::make_shared<MockBackend>(std::move(rules), std::nullopt);
}

std::shared_ptr<MockBackend> MockBackend::from_file(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open mock script: " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("invalid mock script " + path.string() + ": " + e.what());
    }
    std::vector<MockRule> rules;
    for (const auto& r : doc.value("rules", json::array())) {
        MockRule rule;
        if (r.contains("contains")) rule.contains = r["contains"].get<std::string>();
        if (r.contains("prompt_sha256"))
            rule.prompt_sha256 = r["prompt_sha256"].get<std::string>();
        if (!rule.contains && !rule.prompt_sha256)
            throw ConfigError("mock rule needs 'contains' or 'prompt_sha256'");
        rule.response = r.at("response").get<std::string>();
        rules.push_back(std::move(rule));
    }
    std::optional<std::string> default_response;
    if (doc.contains("default"))
        default_response = doc["default"].get<std::string>();
    return std::make_shared<MockBackend>(std::move(rules),
                                         std::move(default_response));
}

HttpBackend::HttpBackend(std::string endpoint_url, std::string api_key,
                         int timeout_seconds)
    : endpoint_url_(std::move(endpoint_url)),
      api_key_(std::move(api_key)),
      timeout_seconds_(timeout_seconds) {}

std::string HttpBackend::complete_raw(const CompletionRequest& req) {
    // split scheme://host[:port] from the path
    auto scheme_end = endpoint_url_.find("://");
    if (scheme_end == std::string::npos)
        throw ConfigError("endpoint URL needs a scheme: " + endpoint_url_);
    auto path_start = endpoint_url_.find('/', scheme_end + 3);
    const std::string base = path_start == std::string::npos
                                 ? endpoint_url_
                                 : endpoint_url_.substr(0, path_start);
    const std::string path = path_start == std::string::npos
                                 ? "/"
                                 : endpoint_url_.substr(path_start);

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (base.rfind("https", 0) == 0)
        throw ConfigError("built without TLS support; use an http:// endpoint");
#endif

    httplib::Client client(base);
    client.set_connection_timeout(timeout_seconds_, 0);
    client.set_read_timeout(timeout_seconds_, 0);

    json payload = {{"model", req.model},
                    {"messages", json::array({{{"role", "user"},
                                               {"content", req.prompt}}})},
                    {"temperature", req.temperature},
                    {"max_tokens", req.max_tokens}};

    httplib::Headers headers;
    if (!api_key_.empty())
        headers.emplace("Authorization", "Bearer " + api_key_);

    auto res = client.Post(path, headers, payload.dump(), "application/json");
    if (!res)
        throw GatewayError("connection failure to " + endpoint_url_ + ": " +
                               httplib::to_string(res.error()),
                           0, 1, true);
    if (res->status == 429 || res->status >= 500)
        throw GatewayError("backend returned status " + std::to_string(res->status),
                           res->status, 1, true);
    if (res->status != 200)
        throw GatewayError("backend returned status " + std::to_string(res->status) +
                               ": " + res->body.substr(0, 200),
                           res->status, 1, false);

    json body = json::parse(res->body, nullptr, false);
    if (body.is_discarded() || !body.contains("choices") ||
        !body["choices"].is_array() || body["choices"].empty() ||
        !body["choices"][0].contains("message") ||
        !body["choices"][0]["message"].contains("content"))
        throw GatewayError("malformed completion response", res->status, 1, false);
    return body["choices"][0]["message"]["content"].get<std::string>();
}

Gateway::Gateway(std::shared_ptr<TextBackend> backend, GatewayOptions options,
                 std::shared_ptr<Clock> clock)
    : backend_(std::move(backend)),
      options_(std::move(options)),
      clock_(clock ? std::move(clock) : std::make_shared<SystemClock>()) {
    if (!backend_) throw ConfigError("gateway needs a backend");
    if (options_.rate_limit_per_second > 0)
        limiter_ = std::make_unique<RateLimiter>(options_.rate_limit_per_second,
                                                 clock_);
    if (options_.cache == CacheMode::disk) {
        if (options_.cache_dir.empty())
            throw ConfigError("disk cache requires a cache directory");
        std::filesystem::create_directories(options_.cache_dir);
    }
}

std::string Gateway::request_digest(const CompletionRequest& req) const {
    char temp[32];
    std::snprintf(temp, sizeof(temp), "%.6g", req.temperature);
    std::string material = backend_->id();
    material.push_back('\x1f');
    material += req.model;
    material.push_back('\x1f');
    material += temp;
    material.push_back('\x1f');
    material += std::to_string(req.max_tokens);
    material.push_back('\x1f');
    material += req.cache_salt;
    material.push_back('\x1f');
    material += req.prompt;
    return sha256_hex(material);
}

std::optional<std::string> Gateway::cache_lookup(const std::string& key) {
    std::lock_guard lock(cache_mu_);
    if (options_.cache == CacheMode::memory) {
        const auto it = memory_cache_.find(key);
        if (it != memory_cache_.end()) return it->second;
        return std::nullopt;
    }
    const auto path = options_.cache_dir / (key + ".json");
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    json entry = json::parse(in, nullptr, false);
    if (entry.is_discarded() || !entry.contains("text")) return std::nullopt;
    return entry["text"].get<std::string>();
}

void Gateway::cache_store(const std::string& key, const CompletionRequest& req,
                          const std::string& text) {
    std::lock_guard lock(cache_mu_);
    if (options_.cache == CacheMode::memory) {
        memory_cache_[key] = text;
        return;
    }
    const json entry = {{"digest", key},
                        {"model", req.model},
                        {"temperature", req.temperature},
                        {"max_tokens", req.max_tokens},
                        {"text", text}};
    const auto path = options_.cache_dir / (key + ".json");
    const auto tmp = options_.cache_dir / (key + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary);
        out << entry.dump();
    }
    std::filesystem::rename(tmp, path);
}

CompletionResult Gateway::complete(const CompletionRequest& req) {
    if (req.prompt.empty()) throw ConfigError("completion prompt is empty");
    if (req.temperature < 0) throw ConfigError("temperature must be >= 0");
    if (req.max_tokens <= 0) throw ConfigError("max_tokens must be positive");

    const std::string key = request_digest(req);
    if (options_.cache != CacheMode::off) {
        if (auto hit = cache_lookup(key))
            return {std::move(*hit), 0, 1, true};
    }

    struct InFlightGuard {
        Gateway* gw;
        explicit InFlightGuard(Gateway* g) : gw(g) {
            if (gw->options_.max_in_flight <= 0) return;
            std::unique_lock lock(gw->inflight_mu_);
            gw->inflight_cv_.wait(lock, [&] {
                return gw->in_flight_ < gw->options_.max_in_flight;
            });
            ++gw->in_flight_;
        }
        ~InFlightGuard() {
            if (gw->options_.max_in_flight <= 0) return;
            {
                std::lock_guard lock(gw->inflight_mu_);
                --gw->in_flight_;
            }
            gw->inflight_cv_.notify_one();
        }
    };

    const int max_attempts = options_.max_retries + 1;
    for (int attempt = 1;; ++attempt) {
        if (limiter_) limiter_->acquire();
        const auto t0 = clock_->now();
        try {
            InFlightGuard guard(this);
            std::string text = strip_trailing_ws(backend_->complete_raw(req));
            const int latency = static_cast<int>(
                std::chrono::duration_cast<std::chrono::milliseconds>(
                    clock_->now() - t0)
                    .count());
            if (options_.cache != CacheMode::off) cache_store(key, req, text);
            return {std::move(text), latency, attempt, false};
        } catch (GatewayError& e) {
            if (!e.retryable) {
                e.attempts = attempt;
                throw;
            }
            if (attempt >= max_attempts)
                throw GatewayError(std::string("retries exhausted: ") + e.what(),
                                   e.status, attempt, true);
            const auto delay = options_.backoff_base * (1 << (attempt - 1));
            clock_->sleep_for(
                std::chrono::duration_cast<std::chrono::milliseconds>(delay));
        }
    }
}

}  // namespace conflictforge::gateway
