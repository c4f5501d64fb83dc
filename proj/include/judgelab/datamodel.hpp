#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "judgelab/common.hpp"

namespace judgelab::data {

/// How a preference instance was produced.
enum class Method { Offtopic, Erroneous, Authored };

/// The five error types the erroneous-response prompts can embed.
enum class FallacyType { WrongFact, Incomplete, Irrelevant, OmitNecessary, Deviate };

/// The closed six-type benchmark category set. `Other` is an escape label
/// accepted by the parser but rejected by validate_bench.
enum class BiasCategory {
    Length,
    Concreteness,
    EmptyReference,
    ContentContinuation,
    NestedInstruction,
    FamiliarKnowledge,
    Other,
};

/// Which output position holds the better response.
enum class Label { A, B };

std::string_view to_string(Method m);
std::string_view to_string(FallacyType f);
std::string_view to_string(BiasCategory c);
std::string_view to_string(Label l);

Method parse_method(std::string_view s);
FallacyType parse_fallacy(std::string_view s);
BiasCategory parse_category(std::string_view s);
Label parse_label(std::string_view s);

const std::vector<FallacyType>& all_fallacies();
const std::vector<BiasCategory>& benchmark_categories();  // the six real ones

/// One turn of a multi-turn conversation.
struct Turn {
    std::string role;  // "user" | "assistant" | "system"
    std::string content;

    bool operator==(const Turn&) const = default;
};

/// An (instruction, good response, bad response) triplet with provenance.
struct PreferenceInstance {
    std::string id;
    std::string instruction;       // single-turn input; empty when conversation used
    std::vector<Turn> conversation;
    std::string good_response;
    std::string bad_response;
    std::string source_dataset;
    Method method = Method::Authored;
    std::optional<FallacyType> fallacy_type;  // present iff method == Erroneous
    std::optional<BiasCategory> bias_category;
    std::string generator_good;
    std::string generator_bad;
    nlohmann::json extra = nlohmann::json::object();  // unknown input fields, written back verbatim

    bool operator==(const PreferenceInstance&) const = default;
};

/// A positioned pairwise judging task: two outputs in fixed order plus the
/// label of the good one.
struct EvalItem {
    std::string instance_id;
    std::string instruction;
    std::vector<Turn> conversation;
    std::string output_1;
    std::string output_2;
    Label label = Label::A;
    bool swapped = false;
    std::optional<BiasCategory> category;
    std::string source_dataset;
    nlohmann::json extra = nlohmann::json::object();

    const std::string& good_output() const { return label == Label::A ? output_1 : output_2; }
    const std::string& bad_output() const { return label == Label::A ? output_2 : output_1; }

    bool operator==(const EvalItem&) const = default;
};

struct BenchmarkSet {
    std::string name;
    std::vector<EvalItem> items;
};

struct Violation {
    std::string rule;
    std::string detail;

    bool operator==(const Violation&) const = default;
};

struct ValidationReport {
    std::string item_id;
    std::vector<Violation> violations;
    bool passed = false;  // passed <=> violations empty
};

/// Deterministic content-derived id, used when input records carry none.
std::string content_id(std::string_view instruction, std::string_view good,
                       std::string_view bad);

/// Enforce the PreferenceInstance invariants (instruction non-empty, good !=
/// bad, fallacy_type present iff method is erroneous). Reading is lenient so
/// that validators can report problems; pipelines call this on their inputs.
void check_invariants(const PreferenceInstance& p);
void check_invariants(const std::vector<PreferenceInstance>& instances);

/// Exchange output positions: outputs swapped, label flipped, `swapped`
/// toggled, everything else preserved. An involution.
EvalItem swap_pair(const EvalItem& item);

/// Each item followed by its swapped twin; size doubles, categories preserved.
/// Throws DataError on an empty set.
BenchmarkSet double_with_swap(const BenchmarkSet& set);

enum class LengthMeasure { Chars, Words };

/// Length of `text` under the configured measure (default: character count
/// of the raw UTF-8 text).
std::size_t text_length(std::string_view text, LengthMeasure measure = LengthMeasure::Chars);

/// len(bad) / len(good). Throws DataError when either text is empty.
double length_ratio(std::string_view good, std::string_view bad,
                    LengthMeasure measure = LengthMeasure::Chars);

/// Checks every item: category present (and not "other"), outputs distinct,
/// instruction or conversation present, and for non-Length categories each
/// output's length at most twice the other's (inclusive at exactly 2.0).
/// Violations are data, not errors.
std::vector<ValidationReport> validate_bench(const BenchmarkSet& set);

/// Count items per category name; items without a category count under "".
std::vector<std::pair<std::string, std::size_t>> category_counts(const BenchmarkSet& set);

// JSON bindings. Unknown fields on read are preserved and written back.
void to_json(nlohmann::json& j, const Turn& t);
void from_json(const nlohmann::json& j, Turn& t);
void to_json(nlohmann::json& j, const PreferenceInstance& p);
void from_json(const nlohmann::json& j, PreferenceInstance& p);
void to_json(nlohmann::json& j, const EvalItem& e);
void from_json(const nlohmann::json& j, EvalItem& e);
void to_json(nlohmann::json& j, const ValidationReport& r);

/// Interpret a benchmark line: either an EvalItem object (output_1/output_2/
/// label) or a PreferenceInstance object (good_response/bad_response), which
/// is converted with the good response in position 1.
EvalItem eval_item_from_bench_json(const nlohmann::json& j);

EvalItem to_eval_item(const PreferenceInstance& p);

/// Load a benchmark JSONL file (either item shape per line).
BenchmarkSet load_benchmark(const std::string& path, std::string name = "");

}  // namespace judgelab::data
