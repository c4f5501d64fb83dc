#include "judgelab/prompts.hpp"

#include <array>
#include <cctype>
#include <utility>

namespace judgelab::prompts {

namespace {

constexpr std::size_t kPromptCount = 12;

const std::array<std::pair<std::string_view, std::string_view>, kPromptCount>& table() {
    static const std::array<std::pair<std::string_view, std::string_view>, kPromptCount> t = {{
#include "prompts_data.inc"
    }};
    return t;
}

bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    for (unsigned char c : s) {
        if (!std::isalnum(c) && c != '_') return false;
    }
    return true;
}

}  // namespace

const std::vector<std::string>& names() {
    static const std::vector<std::string> v = [] {
        std::vector<std::string> out;
        for (const auto& [name, _] : table()) out.emplace_back(name);
        return out;
    }();
    return v;
}

std::string_view body(std::string_view name) {
    for (const auto& [n, b] : table()) {
        if (n == name) return b;
    }
    throw ConfigError("unknown prompt: '" + std::string(name) + "'");
}

std::uint64_t body_hash(std::string_view name) { return fnv1a64(body(name)); }

std::map<std::string, std::string> all_hashes() {
    std::map<std::string, std::string> out;
    for (const auto& [n, b] : table()) out[std::string(n)] = fnv1a64_hex(b);
    return out;
}

std::vector<std::string> placeholders(std::string_view body) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < body.size()) {
        const std::size_t open = body.find('{', pos);
        if (open == std::string_view::npos) break;
        const std::size_t close = body.find('}', open + 1);
        if (close == std::string_view::npos) break;
        const std::string_view token = body.substr(open + 1, close - open - 1);
        if (is_identifier(token)) {
            out.emplace_back(token);
            pos = close + 1;
        } else {
            pos = open + 1;
        }
    }
    return out;
}

std::string render(std::string_view body, const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(body.size());
    std::size_t pos = 0;
    while (pos < body.size()) {
        const std::size_t open = body.find('{', pos);
        if (open == std::string_view::npos) {
            out.append(body.substr(pos));
            break;
        }
        const std::size_t close = body.find('}', open + 1);
        const std::string_view token =
            close == std::string_view::npos ? std::string_view{}
                                            : body.substr(open + 1, close - open - 1);
        if (!is_identifier(token)) {
            out.append(body.substr(pos, open + 1 - pos));
            pos = open + 1;
            continue;
        }
        out.append(body.substr(pos, open - pos));
        const auto it = values.find(std::string(token));
        if (it == values.end())
            throw DataError("missing placeholder value: {" + std::string(token) + "}");
        out.append(it->second);
        pos = close + 1;
    }
    return out;
}

}  // namespace judgelab::prompts
