#include "judgelab/merge.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace judgelab::merge {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void check_tensor(const std::string& name, const Tensor& t) {
    if (t.shape.empty()) throw DataError("tensor '" + name + "': empty shape");
    for (const auto d : t.shape)
        if (d <= 0) throw DataError("tensor '" + name + "': nonpositive dimension");
    if (t.element_count() != static_cast<std::int64_t>(t.values.size()))
        throw DataError("tensor '" + name + "': shape/value count mismatch");
    for (const float v : t.values)
        if (!std::isfinite(v)) throw DataError("tensor '" + name + "': non-finite value");
}

std::vector<std::uint8_t> pack_le(const std::vector<float>& values) {
    std::vector<std::uint8_t> bytes(values.size() * 4);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto u = std::bit_cast<std::uint32_t>(values[i]);
        bytes[4 * i + 0] = static_cast<std::uint8_t>(u & 0xff);
        bytes[4 * i + 1] = static_cast<std::uint8_t>((u >> 8) & 0xff);
        bytes[4 * i + 2] = static_cast<std::uint8_t>((u >> 16) & 0xff);
        bytes[4 * i + 3] = static_cast<std::uint8_t>((u >> 24) & 0xff);
    }
    return bytes;
}

std::vector<float> unpack_le(const std::vector<std::uint8_t>& bytes, const std::string& where) {
    if (bytes.size() % 4 != 0)
        throw DataError(where + ": byte count not a multiple of 4");
    std::vector<float> values(bytes.size() / 4);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::uint32_t u = static_cast<std::uint32_t>(bytes[4 * i + 0]) |
                                (static_cast<std::uint32_t>(bytes[4 * i + 1]) << 8) |
                                (static_cast<std::uint32_t>(bytes[4 * i + 2]) << 16) |
                                (static_cast<std::uint32_t>(bytes[4 * i + 3]) << 24);
        values[i] = std::bit_cast<float>(u);
    }
    return values;
}

WeightMap load_json_format(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw DataError(path + ": " + e.what());
    }
    WeightMap map;
    for (const auto& [name, spec] : j.at("tensors").items()) {
        Tensor t;
        t.shape = spec.at("shape").get<std::vector<std::int64_t>>();
        t.values = spec.at("values").get<std::vector<float>>();
        check_tensor(name, t);
        map.tensors[name] = std::move(t);
    }
    return map;
}

WeightMap load_dir_format(const fs::path& dir) {
    const fs::path manifest_path = dir / "manifest.json";
    std::ifstream in(manifest_path);
    if (!in) throw DataError("cannot open " + manifest_path.string());
    json manifest;
    try {
        manifest = json::parse(in);
    } catch (const json::exception& e) {
        throw DataError(manifest_path.string() + ": " + e.what());
    }

    WeightMap map;
    for (const auto& [name, spec] : manifest.at("tensors").items()) {
        Tensor t;
        t.shape = spec.at("shape").get<std::vector<std::int64_t>>();
        const fs::path data_path = dir / spec.at("file").get<std::string>();
        std::ifstream data(data_path, std::ios::binary);
        if (!data) throw DataError("cannot open " + data_path.string());
        std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(data)),
                                        std::istreambuf_iterator<char>());
        t.values = unpack_le(bytes, data_path.string());
        check_tensor(name, t);
        map.tensors[name] = std::move(t);
    }
    return map;
}

}  // namespace

std::int64_t Tensor::element_count() const {
    std::int64_t n = 1;
    for (const auto d : shape) n *= d;
    return n;
}

WeightMap merge_checkpoints(const WeightMap& a, const WeightMap& b, const MergeConfig& cfg) {
    if (cfg.t < 0.0 || cfg.t > 1.0)
        throw ConfigError("merge ratio t must be in [0,1], got " + std::to_string(cfg.t));

    std::string only_a;
    std::string only_b;
    for (const auto& [name, _] : a.tensors)
        if (!b.tensors.count(name)) only_a += (only_a.empty() ? "" : ", ") + name;
    for (const auto& [name, _] : b.tensors)
        if (!a.tensors.count(name)) only_b += (only_b.empty() ? "" : ", ") + name;
    if (!only_a.empty() || !only_b.empty())
        throw DataError("merge_checkpoints: tensor key sets differ (only in A: {" + only_a +
                        "}, only in B: {" + only_b + "})");

    WeightMap out;
    for (const auto& [name, ta] : a.tensors) {
        const Tensor& tb = b.tensors.at(name);
        if (ta.shape != tb.shape)
            throw DataError("merge_checkpoints: shape mismatch for tensor '" + name + "'");

        const Eigen::Map<const Eigen::VectorXf> va(ta.values.data(),
                                                   static_cast<Eigen::Index>(ta.values.size()));
        const Eigen::Map<const Eigen::VectorXf> vb(tb.values.data(),
                                                   static_cast<Eigen::Index>(tb.values.size()));
        const Eigen::VectorXd merged =
            slerp(va.cast<double>(), vb.cast<double>(), cfg.t, cfg.parallel_threshold);

        Tensor result;
        result.shape = ta.shape;
        result.values.resize(ta.values.size());
        Eigen::Map<Eigen::VectorXf>(result.values.data(),
                                    static_cast<Eigen::Index>(result.values.size())) =
            merged.cast<float>();
        out.tensors[name] = std::move(result);
    }
    return out;
}

WeightMap load_weights(const std::string& path) {
    if (fs::is_directory(path)) return load_dir_format(path);
    if (fs::path(path).extension() == ".json") return load_json_format(path);
    throw DataError("unrecognized checkpoint path (want a directory or a .json file): " + path);
}

void save_weights(const WeightMap& weights, const std::string& path) {
    for (const auto& [name, t] : weights.tensors) check_tensor(name, t);

    if (fs::path(path).extension() == ".json") {
        json tensors = json::object();
        for (const auto& [name, t] : weights.tensors)
            tensors[name] = json{{"shape", t.shape}, {"values", t.values}};
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw DataError("cannot write " + path);
        out << json{{"tensors", tensors}}.dump(2) << '\n';
        return;
    }

    fs::create_directories(path);
    json tensors = json::object();
    std::size_t index = 0;
    for (const auto& [name, t] : weights.tensors) {
        char file[32];
        std::snprintf(file, sizeof(file), "t%05zu.bin", index++);
        tensors[name] = json{{"shape", t.shape}, {"file", file}};
        const auto bytes = pack_le(t.values);
        std::ofstream data(fs::path(path) / file, std::ios::binary | std::ios::trunc);
        if (!data) throw DataError(std::string("cannot write ") + file);
        data.write(reinterpret_cast<const char*>(bytes.data()),
                   static_cast<std::streamsize>(bytes.size()));
    }
    std::ofstream manifest(fs::path(path) / "manifest.json", std::ios::trunc);
    if (!manifest) throw DataError("cannot write manifest.json under " + path);
    manifest << json{{"format", "weightmap-v1"}, {"tensors", tensors}}.dump(2) << '\n';
}

}  // namespace judgelab::merge
