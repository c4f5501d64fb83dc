#include "judgelab/datamodel.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>

#include "judgelab/jsonl.hpp"

namespace judgelab::data {

namespace {

using nlohmann::json;

template <typename E>
E parse_enum(std::string_view s, const std::vector<std::pair<std::string_view, E>>& table,
             const char* what) {
    for (const auto& [name, value] : table) {
        if (name == s) return value;
    }
    throw DataError(std::string("unknown ") + what + ": '" + std::string(s) + "'");
}

const std::vector<std::pair<std::string_view, Method>>& method_table() {
    static const std::vector<std::pair<std::string_view, Method>> t = {
        {"offtopic", Method::Offtopic},
        {"erroneous", Method::Erroneous},
        {"authored", Method::Authored},
    };
    return t;
}

const std::vector<std::pair<std::string_view, FallacyType>>& fallacy_table() {
    static const std::vector<std::pair<std::string_view, FallacyType>> t = {
        {"wrong_fact", FallacyType::WrongFact},
        {"incomplete", FallacyType::Incomplete},
        {"irrelevant", FallacyType::Irrelevant},
        {"omit_necessary", FallacyType::OmitNecessary},
        {"deviate", FallacyType::Deviate},
    };
    return t;
}

const std::vector<std::pair<std::string_view, BiasCategory>>& category_table() {
    static const std::vector<std::pair<std::string_view, BiasCategory>> t = {
        {"length", BiasCategory::Length},
        {"concreteness", BiasCategory::Concreteness},
        {"empty_reference", BiasCategory::EmptyReference},
        {"content_continuation", BiasCategory::ContentContinuation},
        {"nested_instruction", BiasCategory::NestedInstruction},
        {"familiar_knowledge", BiasCategory::FamiliarKnowledge},
        {"other", BiasCategory::Other},
    };
    return t;
}

template <typename E>
std::string_view enum_name(E v, const std::vector<std::pair<std::string_view, E>>& table) {
    for (const auto& [name, value] : table) {
        if (value == v) return name;
    }
    return "?";
}

// Collects keys not in `known` so writes can round-trip them.
json collect_extra(const json& j, std::initializer_list<std::string_view> known) {
    json extra = json::object();
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) extra[key] = value;
    }
    return extra;
}

std::string get_string(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_string())
        throw DataError(std::string("missing or non-string field '") + key + "'");
    return it->get<std::string>();
}

}  // namespace

std::string_view to_string(Method m) { return enum_name(m, method_table()); }
std::string_view to_string(FallacyType f) { return enum_name(f, fallacy_table()); }
std::string_view to_string(BiasCategory c) { return enum_name(c, category_table()); }
std::string_view to_string(Label l) { return l == Label::A ? "a" : "b"; }

Method parse_method(std::string_view s) { return parse_enum(s, method_table(), "method"); }
FallacyType parse_fallacy(std::string_view s) { return parse_enum(s, fallacy_table(), "fallacy_type"); }
BiasCategory parse_category(std::string_view s) { return parse_enum(s, category_table(), "category"); }

Label parse_label(std::string_view s) {
    if (s == "a") return Label::A;
    if (s == "b") return Label::B;
    throw DataError("label must be 'a' or 'b', got '" + std::string(s) + "'");
}

const std::vector<FallacyType>& all_fallacies() {
    static const std::vector<FallacyType> v = {
        FallacyType::WrongFact, FallacyType::Incomplete, FallacyType::Irrelevant,
        FallacyType::OmitNecessary, FallacyType::Deviate};
    return v;
}

const std::vector<BiasCategory>& benchmark_categories() {
    static const std::vector<BiasCategory> v = {
        BiasCategory::Length,       BiasCategory::Concreteness,
        BiasCategory::EmptyReference, BiasCategory::ContentContinuation,
        BiasCategory::NestedInstruction, BiasCategory::FamiliarKnowledge};
    return v;
}

void check_invariants(const PreferenceInstance& p) {
    if (p.instruction.empty() && p.conversation.empty())
        throw DataError("instance '" + p.id + "': instruction must be non-empty");
    if (p.good_response == p.bad_response)
        throw DataError("instance '" + p.id + "': good and bad responses are identical");
    if (p.good_response.empty() || p.bad_response.empty())
        throw DataError("instance '" + p.id + "': responses must be non-empty");
    if (p.fallacy_type.has_value() != (p.method == Method::Erroneous))
        throw DataError("instance '" + p.id + "': fallacy_type present iff method is erroneous");
}

void check_invariants(const std::vector<PreferenceInstance>& instances) {
    for (const auto& p : instances) check_invariants(p);
}

std::string content_id(std::string_view instruction, std::string_view good,
                       std::string_view bad) {
    std::string key;
    key.reserve(instruction.size() + good.size() + bad.size() + 2);
    key.append(instruction);
    key.push_back('\x1f');
    key.append(good);
    key.push_back('\x1f');
    key.append(bad);
    return "id-" + fnv1a64_hex(key);
}

EvalItem swap_pair(const EvalItem& item) {
    EvalItem out = item;
    std::swap(out.output_1, out.output_2);
    out.label = item.label == Label::A ? Label::B : Label::A;
    out.swapped = !item.swapped;
    return out;
}

BenchmarkSet double_with_swap(const BenchmarkSet& set) {
    if (set.items.empty()) throw DataError("double_with_swap: empty benchmark set");
    BenchmarkSet out;
    out.name = set.name;
    out.items.reserve(set.items.size() * 2);
    for (const auto& item : set.items) {
        out.items.push_back(item);
        out.items.push_back(swap_pair(item));
    }
    return out;
}

std::size_t text_length(std::string_view text, LengthMeasure measure) {
    if (measure == LengthMeasure::Chars) return text.size();
    std::size_t words = 0;
    bool in_word = false;
    for (unsigned char c : text) {
        const bool space = std::isspace(c) != 0;
        if (!space && !in_word) ++words;
        in_word = !space;
    }
    return words;
}

double length_ratio(std::string_view good, std::string_view bad, LengthMeasure measure) {
    const std::size_t lg = text_length(good, measure);
    const std::size_t lb = text_length(bad, measure);
    if (lg == 0 || lb == 0) throw DataError("length_ratio: empty text");
    return static_cast<double>(lb) / static_cast<double>(lg);
}

std::vector<ValidationReport> validate_bench(const BenchmarkSet& set) {
    std::vector<ValidationReport> reports;
    reports.reserve(set.items.size());
    for (const auto& item : set.items) {
        ValidationReport rep;
        rep.item_id = item.instance_id;

        if (!item.category) {
            rep.violations.push_back({"category", "missing bias category"});
        } else if (*item.category == BiasCategory::Other) {
            rep.violations.push_back({"category", "'other' is not an accepted benchmark category"});
        }

        if (item.instruction.empty() && item.conversation.empty())
            rep.violations.push_back({"instruction", "instruction and conversation both empty"});

        if (item.output_1 == item.output_2)
            rep.violations.push_back({"distinct_outputs", "good and bad responses are identical"});

        if (item.output_1.empty() || item.output_2.empty()) {
            rep.violations.push_back({"empty_output", "output text must be non-empty"});
        } else if (item.category && *item.category != BiasCategory::Length) {
            // Each response must stay within twice the length of the other;
            // exactly 2.0 passes. Integer compare keeps the boundary exact.
            const std::size_t lg = item.good_output().size();
            const std::size_t lb = item.bad_output().size();
            if (lb > 2 * lg || lg > 2 * lb) {
                const double ratio =
                    static_cast<double>(std::max(lg, lb)) / static_cast<double>(std::min(lg, lb));
                char buf[64];
                std::snprintf(buf, sizeof(buf), "length ratio %.3f exceeds 2.0", ratio);
                rep.violations.push_back({"length_ratio", buf});
            }
        }

        rep.passed = rep.violations.empty();
        reports.push_back(std::move(rep));
    }
    return reports;
}

std::vector<std::pair<std::string, std::size_t>> category_counts(const BenchmarkSet& set) {
    std::map<std::string, std::size_t> counts;
    for (const auto& item : set.items) {
        const std::string key = item.category ? std::string(to_string(*item.category)) : "";
        ++counts[key];
    }
    return {counts.begin(), counts.end()};
}

void to_json(json& j, const Turn& t) {
    j = json{{"role", t.role}, {"content", t.content}};
}

void from_json(const json& j, Turn& t) {
    t.role = get_string(j, "role");
    t.content = get_string(j, "content");
}

void to_json(json& j, const PreferenceInstance& p) {
    j = p.extra.is_object() ? p.extra : json::object();
    j["id"] = p.id;
    if (!p.instruction.empty() || p.conversation.empty()) j["instruction"] = p.instruction;
    if (!p.conversation.empty()) j["conversation"] = p.conversation;
    j["good_response"] = p.good_response;
    j["bad_response"] = p.bad_response;
    j["source_dataset"] = p.source_dataset;
    j["method"] = to_string(p.method);
    if (p.fallacy_type) j["fallacy_type"] = to_string(*p.fallacy_type);
    if (p.bias_category) j["bias_category"] = to_string(*p.bias_category);
    j["generator_good"] = p.generator_good;
    j["generator_bad"] = p.generator_bad;
}

void from_json(const json& j, PreferenceInstance& p) {
    if (!j.is_object()) throw DataError("preference instance must be a JSON object");
    p = PreferenceInstance{};
    p.instruction = j.value("instruction", "");
    if (j.contains("conversation")) p.conversation = j.at("conversation").get<std::vector<Turn>>();
    p.good_response = get_string(j, "good_response");
    p.bad_response = get_string(j, "bad_response");
    p.source_dataset = j.value("source_dataset", "");
    if (j.contains("method")) p.method = parse_method(j.at("method").get<std::string>());
    if (j.contains("fallacy_type") && !j.at("fallacy_type").is_null())
        p.fallacy_type = parse_fallacy(j.at("fallacy_type").get<std::string>());
    if (j.contains("bias_category") && !j.at("bias_category").is_null())
        p.bias_category = parse_category(j.at("bias_category").get<std::string>());
    p.generator_good = j.value("generator_good", "");
    p.generator_bad = j.value("generator_bad", "");
    p.id = j.value("id", "");
    if (p.id.empty()) p.id = content_id(p.instruction, p.good_response, p.bad_response);

    p.extra = collect_extra(j, {"id", "instruction", "conversation", "good_response",
                                "bad_response", "source_dataset", "method", "fallacy_type",
                                "bias_category", "generator_good", "generator_bad"});
}

void to_json(json& j, const EvalItem& e) {
    j = e.extra.is_object() ? e.extra : json::object();
    j["id"] = e.instance_id;
    if (!e.instruction.empty() || e.conversation.empty()) j["instruction"] = e.instruction;
    if (!e.conversation.empty()) j["conversation"] = e.conversation;
    j["output_1"] = e.output_1;
    j["output_2"] = e.output_2;
    j["label"] = to_string(e.label);
    j["swapped"] = e.swapped;
    if (e.category) j["category"] = to_string(*e.category);
    if (!e.source_dataset.empty()) j["source_dataset"] = e.source_dataset;
}

void from_json(const json& j, EvalItem& e) {
    if (!j.is_object()) throw DataError("eval item must be a JSON object");
    e = EvalItem{};
    e.instruction = j.value("instruction", "");
    if (j.contains("conversation")) e.conversation = j.at("conversation").get<std::vector<Turn>>();
    e.output_1 = get_string(j, "output_1");
    e.output_2 = get_string(j, "output_2");
    e.label = parse_label(j.value("label", "a"));
    e.swapped = j.value("swapped", false);
    if (j.contains("category") && !j.at("category").is_null())
        e.category = parse_category(j.at("category").get<std::string>());
    e.source_dataset = j.value("source_dataset", "");
    e.instance_id = j.value("id", j.value("instance_id", ""));
    if (e.instance_id.empty())
        e.instance_id = content_id(e.instruction, e.good_output(), e.bad_output());
    e.extra = collect_extra(j, {"id", "instance_id", "instruction", "conversation", "output_1",
                                "output_2", "label", "swapped", "category", "source_dataset"});
}

void to_json(json& j, const ValidationReport& r) {
    json v = json::array();
    for (const auto& violation : r.violations)
        v.push_back(json{{"rule", violation.rule}, {"detail", violation.detail}});
    j = json{{"item_id", r.item_id}, {"passed", r.passed}, {"violations", v}};
}

EvalItem to_eval_item(const PreferenceInstance& p) {
    EvalItem e;
    e.instance_id = p.id;
    e.instruction = p.instruction;
    e.conversation = p.conversation;
    e.output_1 = p.good_response;
    e.output_2 = p.bad_response;
    e.label = Label::A;
    e.swapped = false;
    e.category = p.bias_category;
    e.source_dataset = p.source_dataset;
    return e;
}

EvalItem eval_item_from_bench_json(const json& j) {
    if (j.contains("output_1") || j.contains("output_2")) return j.get<EvalItem>();
    if (j.contains("good_response") || j.contains("bad_response")) {
        auto p = j.get<PreferenceInstance>();
        EvalItem e = to_eval_item(p);
        // On this path "category" is the benchmark-file spelling.
        if (!e.category && j.contains("category"))
            e.category = parse_category(j.at("category").get<std::string>());
        return e;
    }
    throw DataError("benchmark line has neither output_1/output_2 nor good/bad responses");
}

BenchmarkSet load_benchmark(const std::string& path, std::string name) {
    BenchmarkSet set;
    set.name = name.empty() ? path : std::move(name);
    for (const auto& [line_no, j] : read_jsonl_lines(path)) {
        try {
            set.items.push_back(eval_item_from_bench_json(j));
        } catch (const Error& e) {
            throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
        } catch (const std::exception& e) {
            throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return set;
}

}  // namespace judgelab::data
