#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "judgelab/datamodel.hpp"
#include "judgelab/provider.hpp"

namespace judgelab::judging {

/// The four built-in pairwise judging templates.
enum class TemplateId { GeneralSingle, SafetySingle, GeneralMulti, SafetyMulti };

std::string_view to_string(TemplateId id);
TemplateId parse_template_id(std::string_view s);

struct PromptTemplate {
    std::string name;
    std::string body;
    bool multi_turn = false;  // body uses {conversation} instead of {instruction}

    static PromptTemplate builtin(TemplateId id);

    /// Validate and wrap a custom body: {output_1} and {output_2} exactly
    /// once, plus exactly one of {instruction} or {conversation} exactly
    /// once, and nothing else. Throws ConfigError otherwise.
    static PromptTemplate from_body(std::string name, std::string body);
};

enum class VerdictValue { A, B, Unparseable };

std::string_view to_string(VerdictValue v);
VerdictValue parse_verdict_value(std::string_view s);

struct Verdict {
    VerdictValue value = VerdictValue::Unparseable;
    std::string raw;
};

/// One judgment of one positioned item.
struct JudgeRecord {
    std::string instance_id;
    bool swapped = false;
    Verdict verdict;
    bool correct = false;  // verdict picked the labeled good output; Unparseable never counts
    std::optional<data::BiasCategory> category;
    std::size_t good_len = 0;  // chars of the good response
    std::size_t bad_len = 0;   // chars of the bad response
};

void to_json(nlohmann::json& j, const JudgeRecord& r);
void from_json(const nlohmann::json& j, JudgeRecord& r);

/// Multi-turn rendering of {conversation}: one "Role: content" line per
/// turn ("user" -> Human, "assistant" -> Assistant, "system" -> System),
/// joined by newlines.
std::string conversation_text(const std::vector<data::Turn>& turns);

/// Byte-exact substitution of the item into the template body. Single-turn
/// templates reject items carrying a conversation; empty required fields
/// raise DataError.
std::string render_prompt(const PromptTemplate& tpl, const data::EvalItem& item);

/// Scan for the first "Output (a)" / "Output (b)" token, case-insensitive;
/// whichever occurs first wins. Neither present -> Unparseable.
Verdict parse_verdict(std::string raw);

/// Render, complete, parse, and score one item. Provider failures are
/// recorded as Unparseable verdicts unless `propagate_errors` is set.
JudgeRecord judge_item(provider::Provider& judge, const PromptTemplate& tpl,
                       const data::EvalItem& item, bool propagate_errors = false);

/// Judge a whole set, optionally swap-doubled first. Items are evaluated
/// with at most `parallelism` requests in flight; records come back sorted
/// by (instance_id, swapped).
std::vector<JudgeRecord> judge_set(provider::Provider& judge, const PromptTemplate& tpl,
                                   const data::BenchmarkSet& set, int parallelism, bool swap,
                                   bool propagate_errors = false);

}  // namespace judgelab::judging
