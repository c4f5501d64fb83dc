#include "judgelab/judging.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "judgelab/prompts.hpp"

namespace judgelab::judging {

namespace {

using nlohmann::json;

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

int count_occurrences(std::string_view body, std::string_view token) {
    int n = 0;
    std::size_t pos = 0;
    while ((pos = body.find(token, pos)) != std::string_view::npos) {
        ++n;
        pos += token.size();
    }
    return n;
}

std::string role_display(const std::string& role) {
    if (role == "user" || role == "human") return "Human";
    if (role == "assistant") return "Assistant";
    if (role == "system") return "System";
    std::string out = role;
    if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out;
}

}  // namespace

std::string_view to_string(TemplateId id) {
    switch (id) {
        case TemplateId::GeneralSingle: return "general_single";
        case TemplateId::SafetySingle: return "safety_single";
        case TemplateId::GeneralMulti: return "general_multi";
        case TemplateId::SafetyMulti: return "safety_multi";
    }
    return "?";
}

TemplateId parse_template_id(std::string_view s) {
    if (s == "general_single") return TemplateId::GeneralSingle;
    if (s == "safety_single") return TemplateId::SafetySingle;
    if (s == "general_multi") return TemplateId::GeneralMulti;
    if (s == "safety_multi") return TemplateId::SafetyMulti;
    throw ConfigError("unknown template id: '" + std::string(s) + "'");
}

PromptTemplate PromptTemplate::builtin(TemplateId id) {
    const std::string name = "judge_" + std::string(to_string(id));
    return from_body(std::string(to_string(id)), std::string(prompts::body(name)));
}

PromptTemplate PromptTemplate::from_body(std::string name, std::string body) {
    const int n_instruction = count_occurrences(body, "{instruction}");
    const int n_conversation = count_occurrences(body, "{conversation}");
    const int n_out1 = count_occurrences(body, "{output_1}");
    const int n_out2 = count_occurrences(body, "{output_2}");

    if (n_out1 != 1) throw ConfigError("template '" + name + "': {output_1} must appear exactly once");
    if (n_out2 != 1) throw ConfigError("template '" + name + "': {output_2} must appear exactly once");
    if (n_instruction + n_conversation != 1)
        throw ConfigError("template '" + name +
                          "': exactly one of {instruction} or {conversation} must appear exactly once");
    for (const auto& ph : prompts::placeholders(body)) {
        if (ph != "instruction" && ph != "conversation" && ph != "output_1" && ph != "output_2")
            throw ConfigError("template '" + name + "': unexpected placeholder {" + ph + "}");
    }

    PromptTemplate tpl;
    tpl.name = std::move(name);
    tpl.body = std::move(body);
    tpl.multi_turn = n_conversation == 1;
    return tpl;
}

std::string_view to_string(VerdictValue v) {
    switch (v) {
        case VerdictValue::A: return "a";
        case VerdictValue::B: return "b";
        case VerdictValue::Unparseable: return "unparseable";
    }
    return "?";
}

VerdictValue parse_verdict_value(std::string_view s) {
    if (s == "a") return VerdictValue::A;
    if (s == "b") return VerdictValue::B;
    if (s == "unparseable") return VerdictValue::Unparseable;
    throw DataError("unknown verdict: '" + std::string(s) + "'");
}

void to_json(json& j, const JudgeRecord& r) {
    j = json{{"instance_id", r.instance_id},
             {"swapped", r.swapped},
             {"verdict", to_string(r.verdict.value)},
             {"raw", r.verdict.raw},
             {"correct", r.correct},
             {"good_len", r.good_len},
             {"bad_len", r.bad_len}};
    if (r.category) j["category"] = data::to_string(*r.category);
}

void from_json(const json& j, JudgeRecord& r) {
    r = JudgeRecord{};
    r.instance_id = j.at("instance_id").get<std::string>();
    r.swapped = j.value("swapped", false);
    r.verdict.value = parse_verdict_value(j.at("verdict").get<std::string>());
    r.verdict.raw = j.value("raw", "");
    r.correct = j.at("correct").get<bool>();
    if (j.contains("category") && !j.at("category").is_null())
        r.category = data::parse_category(j.at("category").get<std::string>());
    r.good_len = j.value("good_len", std::size_t{0});
    r.bad_len = j.value("bad_len", std::size_t{0});
}

std::string conversation_text(const std::vector<data::Turn>& turns) {
    std::string out;
    for (std::size_t i = 0; i < turns.size(); ++i) {
        if (i) out.push_back('\n');
        out.append(role_display(turns[i].role));
        out.append(": ");
        out.append(turns[i].content);
    }
    return out;
}

std::string render_prompt(const PromptTemplate& tpl, const data::EvalItem& item) {
    if (item.output_1.empty() || item.output_2.empty())
        throw DataError("item '" + item.instance_id + "': outputs must be non-empty");

    std::map<std::string, std::string> values;
    if (tpl.multi_turn) {
        if (item.conversation.empty())
            throw DataError("item '" + item.instance_id +
                            "': multi-turn template requires a conversation");
        values["conversation"] = conversation_text(item.conversation);
    } else {
        if (!item.conversation.empty())
            throw DataError("item '" + item.instance_id +
                            "': single-turn template cannot take a conversation");
        if (item.instruction.empty())
            throw DataError("item '" + item.instance_id + "': instruction must be non-empty");
        values["instruction"] = item.instruction;
    }
    values["output_1"] = item.output_1;
    values["output_2"] = item.output_2;
    return prompts::render(tpl.body, values);
}

Verdict parse_verdict(std::string raw) {
    Verdict v;
    const std::string lower = lowercase(raw);
    v.raw = std::move(raw);
    const std::size_t pa = lower.find("output (a)");
    const std::size_t pb = lower.find("output (b)");
    if (pa == std::string::npos && pb == std::string::npos) {
        v.value = VerdictValue::Unparseable;
    } else if (pb == std::string::npos || pa < pb) {
        v.value = VerdictValue::A;
    } else {
        v.value = VerdictValue::B;
    }
    return v;
}

namespace {

JudgeRecord make_record(const data::EvalItem& item, Verdict verdict) {
    JudgeRecord rec;
    rec.instance_id = item.instance_id;
    rec.swapped = item.swapped;
    rec.correct = (verdict.value == VerdictValue::A && item.label == data::Label::A) ||
                  (verdict.value == VerdictValue::B && item.label == data::Label::B);
    rec.verdict = std::move(verdict);
    rec.category = item.category;
    rec.good_len = item.good_output().size();
    rec.bad_len = item.bad_output().size();
    return rec;
}

}  // namespace

JudgeRecord judge_item(provider::Provider& judge, const PromptTemplate& tpl,
                       const data::EvalItem& item, bool propagate_errors) {
    const std::string prompt = render_prompt(tpl, item);
    std::string completion;
    try {
        completion = judge.complete(provider::CompletionRequest::user(prompt));
    } catch (const ProviderError& e) {
        if (propagate_errors) throw;
        Verdict v;
        v.value = VerdictValue::Unparseable;
        v.raw = std::string("[provider error] ") + e.what();
        return make_record(item, std::move(v));
    }
    return make_record(item, parse_verdict(std::move(completion)));
}

std::vector<JudgeRecord> judge_set(provider::Provider& judge, const PromptTemplate& tpl,
                                   const data::BenchmarkSet& set, int parallelism, bool swap,
                                   bool propagate_errors) {
    const data::BenchmarkSet working = swap ? data::double_with_swap(set) : set;

    std::vector<provider::CompletionRequest> requests;
    requests.reserve(working.items.size());
    for (const auto& item : working.items)
        requests.push_back(provider::CompletionRequest::user(render_prompt(tpl, item)));

    const auto results = provider::batch_complete(judge, requests, parallelism);

    std::vector<JudgeRecord> records;
    records.reserve(working.items.size());
    for (std::size_t i = 0; i < working.items.size(); ++i) {
        if (results[i].ok()) {
            records.push_back(make_record(working.items[i], parse_verdict(results[i].text)));
        } else {
            if (propagate_errors) throw ProviderError(results[i].error);
            Verdict v;
            v.value = VerdictValue::Unparseable;
            v.raw = "[provider error] " + results[i].error;
            records.push_back(make_record(working.items[i], std::move(v)));
        }
    }
    std::stable_sort(records.begin(), records.end(), [](const JudgeRecord& a, const JudgeRecord& b) {
        if (a.instance_id != b.instance_id) return a.instance_id < b.instance_id;
        return a.swapped < b.swapped;
    });
    return records;
}

}  // namespace judgelab::judging
