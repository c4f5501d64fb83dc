#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "judgelab/common.hpp"

namespace judgelab::provider {

enum class ProviderKind { Http, Mock };

struct RetryPolicy {
    int max_attempts = 3;
    double base_backoff_s = 0.5;
};

/// Delay before re-attempting after `failed_attempt` (1-based) failures:
/// base * 2^(failed_attempt-1). Nondecreasing in the attempt number.
double retry_delay_seconds(const RetryPolicy& policy, int failed_attempt);

/// A scripted completion backend: the first rule whose pattern matches the
/// rendered prompt wins; `regex` selects ECMAScript regex search over plain
/// substring search.
struct MockRule {
    std::string match;
    bool regex = false;
    std::string response;
};

struct MockScript {
    std::vector<MockRule> rules;
    std::optional<std::string> default_response;

    static MockScript from_json(const nlohmann::json& j);
    static MockScript load(const std::string& path);
};

struct ProviderConfig {
    ProviderKind kind = ProviderKind::Mock;
    std::string base_url;      // http only
    std::string model_name;
    std::string api_key_env;   // env var holding the bearer token; empty = no auth header
    double temperature = 0.0;  // greedy by default
    int max_tokens = 1024;
    double timeout_s = 60.0;
    RetryPolicy retry;
    MockScript script;         // mock only
};

ProviderConfig provider_config_from_json(const nlohmann::json& j);

/// Load a provider config JSON file. A "script_path" entry is resolved
/// relative to the config file's directory.
ProviderConfig load_provider_config(const std::string& path);

struct Message {
    std::string role;  // "system" | "user" | "assistant"
    std::string content;
};

struct CompletionRequest {
    std::vector<Message> messages;
    std::optional<double> temperature;  // override config default
    std::optional<int> max_tokens;

    static CompletionRequest user(std::string content);
};

/// The text mock rules match against: message contents joined by newlines.
std::string prompt_text(const CompletionRequest& req);

class Provider {
public:
    virtual ~Provider() = default;

    /// Returns the assistant message text. Throws ProviderError on failure
    /// (after exhausting the retry policy, for HTTP backends).
    virtual std::string complete(const CompletionRequest& req) = 0;

    virtual const ProviderConfig& config() const = 0;
};

class MockProvider : public Provider {
public:
    explicit MockProvider(MockScript script, ProviderConfig cfg = {});

    std::string complete(const CompletionRequest& req) override;
    const ProviderConfig& config() const override { return cfg_; }

    std::size_t call_count() const;
    std::vector<std::string> call_log() const;

private:
    ProviderConfig cfg_;
    mutable std::mutex mu_;
    std::vector<std::string> log_;
};

/// OpenAI-style chat-completions client: POST {base_url}/chat/completions
/// with {model, messages, temperature, max_tokens} and a bearer token from
/// the configured environment variable. 5xx and transport failures are
/// retried with exponential backoff; 4xx and empty completions are not.
class HttpProvider : public Provider {
public:
    explicit HttpProvider(ProviderConfig cfg);

    std::string complete(const CompletionRequest& req) override;
    const ProviderConfig& config() const override { return cfg_; }

private:
    ProviderConfig cfg_;
    std::string host_;         // scheme://host[:port]
    std::string path_prefix_;  // anything after the authority
};

std::unique_ptr<Provider> make_provider(const ProviderConfig& cfg);

struct BatchResult {
    std::string text;
    std::string error;

    bool ok() const { return error.empty(); }
};

/// Run the requests with at most `parallelism` in flight; results are keyed
/// by input index and per-request failures are reported individually.
std::vector<BatchResult> batch_complete(Provider& provider,
                                        const std::vector<CompletionRequest>& reqs,
                                        int parallelism);

}  // namespace judgelab::provider
