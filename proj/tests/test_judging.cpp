#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>

#include "judgelab/judging.hpp"
#include "judgelab/prompts.hpp"

using namespace judgelab;
using namespace judgelab::judging;
using judgelab::data::BiasCategory;
using judgelab::data::EvalItem;
using judgelab::data::Label;

namespace {

// Pinned FNV-1a 64 hashes of the verbatim prompt bodies. A mismatch means a
// template drifted from resources/prompts/.
const std::map<std::string, std::uint64_t> kPromptHashes = {
    {"offtopic_similar_instruction", 0x826da6eaf2830292ull},
    {"offtopic_distinct_check", 0x369c4c7be16721a1ull},
    {"erroneous_wrong_fact", 0x89e38a04c34cf8c4ull},
    {"erroneous_incomplete", 0x7ac037e19afdceabull},
    {"erroneous_irrelevant", 0x4614dcc4992be384ull},
    {"erroneous_omit_necessary", 0xea8b4d726e0a145dull},
    {"erroneous_deviate", 0x2bc3cd083f5dded2ull},
    {"erroneous_correctness_check", 0xbd56b4b7c98a352aull},
    {"judge_general_single", 0xcd3d7d3199ade4a3ull},
    {"judge_safety_single", 0x971677763a04cf61ull},
    {"judge_general_multi", 0x047aa023481bc2edull},
    {"judge_safety_multi", 0x9d5a29d0b78abd83ull},
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string resource_path(const std::string& name) {
    return std::string(JUDGELAB_RESOURCES_DIR) + "/prompts/" + name + ".txt";
}

// Independent substitution route used to cross-check render_prompt.
std::string replace_once(std::string text, const std::string& token, const std::string& value) {
    const auto pos = text.find(token);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, token.size(), value);
}

EvalItem single_item(std::string id, Label label = Label::A) {
    EvalItem item;
    item.instance_id = std::move(id);
    item.instruction = "Describe a bird";
    item.output_1 = "X";
    item.output_2 = "Y";
    item.label = label;
    return item;
}

}  // namespace

TEST_CASE("embedded prompt bodies match the resource files and pinned hashes") {
    REQUIRE(prompts::names().size() == kPromptHashes.size());
    for (const auto& [name, hash] : kPromptHashes) {
        const std::string_view embedded = prompts::body(name);
        CHECK_MESSAGE(fnv1a64(embedded) == hash, name);
        CHECK_MESSAGE(embedded == read_file(resource_path(name)), name);
    }
    CHECK_THROWS_AS(prompts::body("nonexistent"), ConfigError);
}

TEST_CASE("render of general_single is byte-exact") {
    const auto tpl = PromptTemplate::builtin(TemplateId::GeneralSingle);
    const std::string rendered = render_prompt(tpl, single_item("i1"));

    CHECK(rendered.find("# Instruction:\nDescribe a bird") != std::string::npos);
    CHECK(rendered.find("# Output (a):\nX") != std::string::npos);
    CHECK(rendered.find("# Output (b):\nY") != std::string::npos);

    std::string expected = read_file(resource_path("judge_general_single"));
    expected = replace_once(expected, "{instruction}", "Describe a bird");
    expected = replace_once(expected, "{output_1}", "X");
    expected = replace_once(expected, "{output_2}", "Y");
    CHECK(rendered == expected);
    CHECK(fnv1a64(rendered) == fnv1a64(expected));
}

TEST_CASE("multi-turn templates prefix outputs with Assistant:") {
    const auto tpl = PromptTemplate::builtin(TemplateId::SafetyMulti);
    EvalItem item;
    item.instance_id = "c1";
    item.conversation = {{"user", "hi"}, {"assistant", "hello, how can I help?"}};
    item.output_1 = "P";
    item.output_2 = "Q";
    const std::string rendered = render_prompt(tpl, item);
    CHECK(rendered.find("# Output (a):\nAssistant: P") != std::string::npos);
    CHECK(rendered.find("# Output (b):\nAssistant: Q") != std::string::npos);
    CHECK(rendered.find("# Conversation:\nHuman: hi\nAssistant: hello, how can I help?") !=
          std::string::npos);
}

TEST_CASE("template validation happens at load time") {
    CHECK_THROWS_AS(PromptTemplate::from_body("broken", "{instruction} {output_1}"), ConfigError);
    CHECK_THROWS_AS(PromptTemplate::from_body("double", "{instruction} {output_1} {output_1} {output_2}"),
                    ConfigError);
    CHECK_THROWS_AS(PromptTemplate::from_body("both", "{instruction} {conversation} {output_1} {output_2}"),
                    ConfigError);
    CHECK_THROWS_AS(
        PromptTemplate::from_body("stray", "{instruction} {output_1} {output_2} {mystery}"),
        ConfigError);
    const auto ok = PromptTemplate::from_body("ok", "{conversation} {output_1} {output_2}");
    CHECK(ok.multi_turn);
}

TEST_CASE("render_prompt validates the item against the template") {
    const auto single = PromptTemplate::builtin(TemplateId::GeneralSingle);
    const auto multi = PromptTemplate::builtin(TemplateId::GeneralMulti);

    EvalItem with_conversation = single_item("c");
    with_conversation.conversation = {{"user", "hi"}};
    CHECK_THROWS_AS(render_prompt(single, with_conversation), DataError);

    EvalItem no_conversation = single_item("n");
    CHECK_THROWS_AS(render_prompt(multi, no_conversation), DataError);

    EvalItem empty_output = single_item("e");
    empty_output.output_2.clear();
    CHECK_THROWS_AS(render_prompt(single, empty_output), DataError);

    EvalItem blank = single_item("b");
    blank.instruction.clear();
    CHECK_THROWS_AS(render_prompt(single, blank), DataError);
}

TEST_CASE("placeholder text inside field values is not re-substituted") {
    const auto tpl = PromptTemplate::builtin(TemplateId::GeneralSingle);
    EvalItem item = single_item("inj");
    item.instruction = "Use {output_1} literally";
    const std::string rendered = render_prompt(tpl, item);
    CHECK(rendered.find("Use {output_1} literally") != std::string::npos);
}

TEST_CASE("render_prompt distinguishes output orderings") {
    const auto tpl = PromptTemplate::builtin(TemplateId::GeneralSingle);
    const EvalItem item = single_item("x");
    CHECK(render_prompt(tpl, item) != render_prompt(tpl, data::swap_pair(item)));
}

TEST_CASE("parse_verdict takes the first answer token") {
    CHECK(parse_verdict("Output (a)").value == VerdictValue::A);
    CHECK(parse_verdict("  output (b)\n").value == VerdictValue::B);
    CHECK(parse_verdict("Both are good.").value == VerdictValue::Unparseable);
    CHECK(parse_verdict("").value == VerdictValue::Unparseable);
    CHECK(parse_verdict("I think Output (b) beats Output (a).").value == VerdictValue::B);
    CHECK(parse_verdict("OUTPUT (A) is best").value == VerdictValue::A);
    const Verdict v = parse_verdict("Output (a)");
    CHECK(v.raw == "Output (a)");
}

TEST_CASE("judge_item scores the verdict against the label") {
    provider::MockProvider always_a({{}, std::string("Output (a)")});

    const JudgeRecord hit = judge_item(always_a, PromptTemplate::builtin(TemplateId::GeneralSingle),
                                       single_item("i", Label::A));
    CHECK(hit.correct);
    CHECK(hit.verdict.value == VerdictValue::A);
    CHECK(hit.good_len == 1);
    CHECK(hit.bad_len == 1);

    const JudgeRecord miss = judge_item(
        always_a, PromptTemplate::builtin(TemplateId::GeneralSingle), single_item("i", Label::B));
    CHECK_FALSE(miss.correct);
}

TEST_CASE("judge_item records provider failures as Unparseable by default") {
    provider::MockProvider no_rules({});
    const auto tpl = PromptTemplate::builtin(TemplateId::GeneralSingle);
    const JudgeRecord rec = judge_item(no_rules, tpl, single_item("i"));
    CHECK(rec.verdict.value == VerdictValue::Unparseable);
    CHECK_FALSE(rec.correct);
    CHECK(rec.verdict.raw.find("provider error") != std::string::npos);

    CHECK_THROWS_AS(judge_item(no_rules, tpl, single_item("i"), /*propagate_errors=*/true),
                    ProviderError);
}

TEST_CASE("judge_set doubles with swap and orders records deterministically") {
    provider::MockProvider always_a({{}, std::string("Output (a)")});
    const auto tpl = PromptTemplate::builtin(TemplateId::GeneralSingle);

    data::BenchmarkSet set;
    for (int i = 0; i < 10; ++i) {
        EvalItem item = single_item("id" + std::to_string(i));
        item.output_1 = "good " + std::to_string(i);
        item.output_2 = "bad " + std::to_string(i);
        item.category = data::benchmark_categories()[i % 6];
        set.items.push_back(item);
    }

    const auto records = judge_set(always_a, tpl, set, 3, /*swap=*/true);
    REQUIRE(records.size() == 20);
    std::size_t correct = 0;
    for (const auto& r : records) correct += r.correct ? 1 : 0;
    CHECK(correct == 10);  // a constant judge is right on exactly half of a doubled set

    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto key = [](const JudgeRecord& r) { return std::pair(r.instance_id, r.swapped); };
        CHECK(key(records[i - 1]) < key(records[i]));
    }

    const auto no_swap = judge_set(always_a, tpl, set, 2, /*swap=*/false);
    CHECK(no_swap.size() == 10);
}

TEST_CASE("judge records serialize round-trip") {
    JudgeRecord rec;
    rec.instance_id = "r1";
    rec.swapped = true;
    rec.verdict = parse_verdict("Output (b)");
    rec.correct = false;
    rec.category = BiasCategory::EmptyReference;
    rec.good_len = 11;
    rec.bad_len = 44;

    const nlohmann::json j = rec;
    CHECK(j.at("verdict") == "b");
    CHECK(j.at("raw") == "Output (b)");
    const auto back = j.get<JudgeRecord>();
    CHECK(back.instance_id == rec.instance_id);
    CHECK(back.swapped == rec.swapped);
    CHECK(back.verdict.value == rec.verdict.value);
    CHECK(back.verdict.raw == rec.verdict.raw);
    CHECK(back.category == rec.category);
    CHECK(back.good_len == 11);
    CHECK(back.bad_len == 44);
}
