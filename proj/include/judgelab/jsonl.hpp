#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "judgelab/common.hpp"

namespace judgelab {

/// Parse a JSONL file: one JSON object per line, blank lines ignored.
/// Returns (1-based line number, value) pairs. A malformed line raises
/// DataError citing its line number.
std::vector<std::pair<std::size_t, nlohmann::json>> read_jsonl_lines(const std::string& path);

std::vector<nlohmann::json> read_jsonl_raw(const std::string& path);

template <typename T>
std::vector<T> read_jsonl(const std::string& path) {
    std::vector<T> out;
    for (const auto& [line_no, j] : read_jsonl_lines(path)) {
        try {
            out.push_back(j.template get<T>());
        } catch (const Error&) {
            throw;
        } catch (const std::exception& e) {
            throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

void write_jsonl_raw(const std::string& path, const std::vector<nlohmann::json>& records);

template <typename T>
void write_jsonl(const std::string& path, const std::vector<T>& records) {
    std::vector<nlohmann::json> raw;
    raw.reserve(records.size());
    for (const auto& r : records) raw.push_back(nlohmann::json(r));
    write_jsonl_raw(path, raw);
}

/// One record per line, compact form with sorted keys; ends with a newline
/// unless empty. Serialization is deterministic for reproducible runs.
std::string to_jsonl_string(const std::vector<nlohmann::json>& records);

}  // namespace judgelab
