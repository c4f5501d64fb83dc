#include "judgelab/provider.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <thread>

#include <httplib.h>

namespace judgelab::provider {

namespace {

using nlohmann::json;

ProviderKind parse_kind(const std::string& s) {
    if (s == "http") return ProviderKind::Http;
    if (s == "mock") return ProviderKind::Mock;
    throw ConfigError("provider kind must be 'http' or 'mock', got '" + s + "'");
}

void validate(const ProviderConfig& cfg) {
    if (cfg.temperature < 0.0) throw ConfigError("temperature must be >= 0");
    if (cfg.max_tokens <= 0) throw ConfigError("max_tokens must be positive");
    if (cfg.retry.max_attempts < 1) throw ConfigError("retry.max_attempts must be >= 1");
    if (cfg.kind == ProviderKind::Http && cfg.base_url.empty())
        throw ConfigError("http provider requires base_url");
}

}  // namespace

double retry_delay_seconds(const RetryPolicy& policy, int failed_attempt) {
    if (failed_attempt < 1) return 0.0;
    return policy.base_backoff_s * std::pow(2.0, failed_attempt - 1);
}

MockScript MockScript::from_json(const json& j) {
    MockScript s;
    for (const auto& r : j.value("rules", json::array())) {
        MockRule rule;
        rule.match = r.at("match").get<std::string>();
        rule.regex = r.value("regex", false);
        rule.response = r.at("response").get<std::string>();
        s.rules.push_back(std::move(rule));
    }
    if (j.contains("default_response") && !j.at("default_response").is_null())
        s.default_response = j.at("default_response").get<std::string>();
    return s;
}

MockScript MockScript::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open mock script: " + path);
    try {
        return from_json(json::parse(in));
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

ProviderConfig provider_config_from_json(const json& j) {
    ProviderConfig cfg;
    cfg.kind = parse_kind(j.value("kind", "mock"));
    cfg.base_url = j.value("base_url", "");
    cfg.model_name = j.value("model_name", "");
    cfg.api_key_env = j.value("api_key_env", "");
    cfg.temperature = j.value("temperature", 0.0);
    cfg.max_tokens = j.value("max_tokens", 1024);
    cfg.timeout_s = j.value("timeout_s", 60.0);
    if (j.contains("retry")) {
        const auto& r = j.at("retry");
        cfg.retry.max_attempts = r.value("max_attempts", 3);
        cfg.retry.base_backoff_s = r.value("base_backoff_s", 0.5);
    }
    if (j.contains("script")) cfg.script = MockScript::from_json(j.at("script"));
    validate(cfg);
    return cfg;
}

ProviderConfig load_provider_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open provider config: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    if (j.contains("script_path")) {
        const auto script =
            std::filesystem::path(path).parent_path() / j.at("script_path").get<std::string>();
        j["script"] = json::object();
        ProviderConfig cfg = provider_config_from_json(j);
        cfg.script = MockScript::load(script.string());
        return cfg;
    }
    return provider_config_from_json(j);
}

CompletionRequest CompletionRequest::user(std::string content) {
    CompletionRequest req;
    req.messages.push_back({"user", std::move(content)});
    return req;
}

std::string prompt_text(const CompletionRequest& req) {
    std::string out;
    for (std::size_t i = 0; i < req.messages.size(); ++i) {
        if (i) out.push_back('\n');
        out.append(req.messages[i].content);
    }
    return out;
}

MockProvider::MockProvider(MockScript script, ProviderConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.kind = ProviderKind::Mock;
    cfg_.script = std::move(script);
}

std::string MockProvider::complete(const CompletionRequest& req) {
    if (req.messages.empty()) throw ConfigError("completion request has no messages");
    const std::string text = prompt_text(req);
    {
        std::lock_guard<std::mutex> lock(mu_);
        log_.push_back(text);
    }
    for (const auto& rule : cfg_.script.rules) {
        const bool hit = rule.regex ? std::regex_search(text, std::regex(rule.match))
                                    : text.find(rule.match) != std::string::npos;
        if (hit) return rule.response;
    }
    if (cfg_.script.default_response) return *cfg_.script.default_response;
    throw ProviderError("no mock rule matched prompt: " +
                            (text.size() > 120 ? text.substr(0, 120) + "..." : text),
                        0, false);
}

std::size_t MockProvider::call_count() const {
    std::lock_guard<std::mutex> lock(mu_);
    return log_.size();
}

std::vector<std::string> MockProvider::call_log() const {
    std::lock_guard<std::mutex> lock(mu_);
    return log_;
}

HttpProvider::HttpProvider(ProviderConfig cfg) : cfg_(std::move(cfg)) {
    validate(cfg_);
    // Split the authority from any path prefix: http://host:port/v1 ->
    // ("http://host:port", "/v1").
    const auto scheme_end = cfg_.base_url.find("://");
    const auto path_start =
        cfg_.base_url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    if (path_start == std::string::npos) {
        host_ = cfg_.base_url;
    } else {
        host_ = cfg_.base_url.substr(0, path_start);
        path_prefix_ = cfg_.base_url.substr(path_start);
        while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
    }
    if (!cfg_.api_key_env.empty()) {
        const char* key = std::getenv(cfg_.api_key_env.c_str());
        if (key == nullptr || *key == '\0')
            throw ConfigError("API key environment variable not set: " + cfg_.api_key_env);
    }
}

std::string HttpProvider::complete(const CompletionRequest& req) {
    if (req.messages.empty()) throw ConfigError("completion request has no messages");

    json messages = json::array();
    for (const auto& m : req.messages)
        messages.push_back(json{{"role", m.role}, {"content", m.content}});
    const json body = {
        {"model", cfg_.model_name},
        {"messages", messages},
        {"temperature", req.temperature.value_or(cfg_.temperature)},
        {"max_tokens", req.max_tokens.value_or(cfg_.max_tokens)},
    };
    const std::string payload = body.dump();

    std::optional<ProviderError> last;
    for (int attempt = 1; attempt <= cfg_.retry.max_attempts; ++attempt) {
        if (attempt > 1) {
            const double delay = retry_delay_seconds(cfg_.retry, attempt - 1);
            std::this_thread::sleep_for(std::chrono::duration<double>(delay));
        }

        httplib::Client client(host_);
        client.set_connection_timeout(std::chrono::duration<double>(cfg_.timeout_s));
        client.set_read_timeout(std::chrono::duration<double>(cfg_.timeout_s));
        if (!cfg_.api_key_env.empty()) {
            const char* key = std::getenv(cfg_.api_key_env.c_str());
            if (key == nullptr || *key == '\0')
                throw ConfigError("API key environment variable not set: " + cfg_.api_key_env);
            client.set_bearer_token_auth(key);
        }

        auto res = client.Post(path_prefix_ + "/chat/completions", payload, "application/json");
        if (!res) {
            last = ProviderError("transport error: " + httplib::to_string(res.error()), 0, true);
            continue;
        }
        if (res->status >= 500) {
            last = ProviderError("server error: HTTP " + std::to_string(res->status), res->status,
                                 true);
            continue;
        }
        if (res->status >= 400) {
            throw ProviderError("request rejected: HTTP " + std::to_string(res->status) + ": " +
                                    res->body,
                                res->status, false);
        }

        json parsed;
        try {
            parsed = json::parse(res->body);
        } catch (const json::exception& e) {
            throw ProviderError(std::string("malformed completion response: ") + e.what(),
                                res->status, false);
        }
        std::string content;
        try {
            content = parsed.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const json::exception&) {
            throw ProviderError("completion response missing choices[0].message.content",
                                res->status, false);
        }
        if (content.empty())
            throw ProviderError("empty completion from backend", res->status, false);
        return content;
    }
    throw last.value_or(ProviderError("completion failed", 0, false));
}

std::unique_ptr<Provider> make_provider(const ProviderConfig& cfg) {
    validate(cfg);
    if (cfg.kind == ProviderKind::Mock) return std::make_unique<MockProvider>(cfg.script, cfg);
    return std::make_unique<HttpProvider>(cfg);
}

std::vector<BatchResult> batch_complete(Provider& provider,
                                        const std::vector<CompletionRequest>& reqs,
                                        int parallelism) {
    if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
    std::vector<BatchResult> results(reqs.size());
    if (reqs.empty()) return results;

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= reqs.size()) return;
            try {
                results[i].text = provider.complete(reqs[i]);
            } catch (const std::exception& e) {
                results[i].error = e.what();
            }
        }
    };

    const std::size_t n_workers =
        std::min<std::size_t>(static_cast<std::size_t>(parallelism), reqs.size());
    if (n_workers == 1) {
        worker();
        return results;
    }
    std::vector<std::thread> threads;
    threads.reserve(n_workers);
    for (std::size_t i = 0; i < n_workers; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    return results;
}

}  // namespace judgelab::provider
