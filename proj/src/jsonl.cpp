#include "judgelab/jsonl.hpp"

#include <fstream>
#include <sstream>

namespace judgelab {

std::vector<std::pair<std::size_t, nlohmann::json>> read_jsonl_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);

    std::vector<std::pair<std::size_t, nlohmann::json>> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            out.emplace_back(line_no, nlohmann::json::parse(line));
        } catch (const nlohmann::json::parse_error& e) {
            throw DataError(path + ":" + std::to_string(line_no) + ": malformed JSON line: " +
                            e.what());
        }
    }
    return out;
}

std::vector<nlohmann::json> read_jsonl_raw(const std::string& path) {
    std::vector<nlohmann::json> out;
    for (auto& [line, j] : read_jsonl_lines(path)) out.push_back(std::move(j));
    return out;
}

std::string to_jsonl_string(const std::vector<nlohmann::json>& records) {
    std::ostringstream os;
    for (const auto& r : records) os << r.dump() << '\n';
    return os.str();
}

void write_jsonl_raw(const std::string& path, const std::vector<nlohmann::json>& records) {
    std::ofstream outf(path, std::ios::binary | std::ios::trunc);
    if (!outf) throw DataError("cannot write " + path);
    outf << to_jsonl_string(records);
    if (!outf) throw DataError("write failed: " + path);
}

}  // namespace judgelab
