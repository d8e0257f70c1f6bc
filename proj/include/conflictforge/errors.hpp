#pragma once

#include <stdexcept>
#include <string>

namespace conflictforge {

// Base for everything the toolkit throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Tagged-output extraction failures (missing/empty tags, missing bindings).
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Sample-level generation failure; assembly retries these with a fresh draw.
class GenerationError : public Error {
public:
    explicit GenerationError(const std::string& msg) : Error(msg) {}
};

// Backend/transport failure surfaced by the gateway after retry policy ran.
class GatewayError : public Error {
public:
    GatewayError(const std::string& msg, int status, int attempts, bool retryable)
        : Error(msg), status(status), attempts(attempts), retryable(retryable) {}

    int status = 0;
    int attempts = 0;
    bool retryable = false;
};

// Scripted mock has no rule for a prompt and no default response.
class ScriptGapError : public GatewayError {
public:
    explicit ScriptGapError(const std::string& prompt_sha256)
        : GatewayError("mock script has no rule for prompt sha256:" + prompt_sha256,
                       0, 1, false),
          prompt_sha256(prompt_sha256) {}

    std::string prompt_sha256;
};

class ScoringError : public Error {
public:
    explicit ScoringError(const std::string& msg) : Error(msg) {}
};

}  // namespace conflictforge
