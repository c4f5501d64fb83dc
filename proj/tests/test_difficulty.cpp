#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "judgelab/difficulty.hpp"

using namespace judgelab;
using namespace judgelab::difficulty;
using judgelab::data::PreferenceInstance;
using judgelab::judging::PromptTemplate;
using judgelab::judging::TemplateId;
using judgelab::provider::MockProvider;
using judgelab::provider::MockScript;

namespace {

PreferenceInstance instance(const std::string& marker) {
    PreferenceInstance p;
    p.id = marker;
    p.instruction = "INSTR " + marker;
    p.good_response = "GOOD " + marker;
    p.bad_response = "BAD " + marker;
    p.source_dataset = "unit";
    return p;
}

// A judge that picks the position holding GOOD/BAD <marker>, independent of
// ordering: correct (or wrong) under both orders.
void add_pick_rules(MockScript& script, const std::string& marker, bool pick_good) {
    const std::string target = (pick_good ? "GOOD " : "BAD ") + marker;
    script.rules.push_back({"# Output (a):\n" + target, false, "Output (a)"});
    script.rules.push_back({"# Output (b):\n" + target, false, "Output (b)"});
}

MockScript script_for(const std::vector<PreferenceInstance>& instances,
                      const std::map<std::string, bool>& correct_table) {
    MockScript script;
    for (const auto& p : instances) add_pick_rules(script, p.id, correct_table.at(p.id));
    return script;
}

std::set<std::string> ids_of(const std::vector<PreferenceInstance>& instances) {
    std::set<std::string> ids;
    for (const auto& p : instances) ids.insert(p.id);
    return ids;
}

const PromptTemplate& tpl() {
    static const PromptTemplate t = PromptTemplate::builtin(TemplateId::GeneralSingle);
    return t;
}

}  // namespace

TEST_CASE("exhaustive outcome fixture: only both-correct is discarded") {
    const std::vector<PreferenceInstance> instances = {instance("tt"), instance("tf"),
                                                       instance("ft"), instance("ff")};
    const std::map<std::string, bool> judge1_table = {
        {"tt", true}, {"tf", true}, {"ft", false}, {"ff", false}};
    const std::map<std::string, bool> judge2_table = {
        {"tt", true}, {"tf", false}, {"ft", true}, {"ff", false}};

    MockProvider judge1(script_for(instances, judge1_table));
    MockProvider judge2(script_for(instances, judge2_table));

    const FilterResult result =
        difficulty_filter(judge1, tpl(), judge2, tpl(), instances, FilterMode::BothOrders);

    CHECK(ids_of(result.discarded) == std::set<std::string>{"tt"});
    CHECK(ids_of(result.kept) == std::set<std::string>{"tf", "ft", "ff"});
    REQUIRE(result.outcomes.size() == 4);
    for (const auto& o : result.outcomes) {
        CHECK(o.judge1_correct == judge1_table.at(o.instance_id));
        CHECK(o.judge2_correct == judge2_table.at(o.instance_id));
        CHECK(o.discarded == (o.judge1_correct && o.judge2_correct));
    }
    CHECK(result.stats.total == 4);
    CHECK(result.stats.discarded == 1);
    CHECK(result.stats.discard_fraction == doctest::Approx(0.25));
}

TEST_CASE("randomized filter matches the brute-force oracle") {
    std::mt19937 rng(20240503);
    std::vector<PreferenceInstance> instances;
    std::map<std::string, bool> table1;
    std::map<std::string, bool> table2;
    for (int i = 0; i < 100; ++i) {
        // Fixed-width ids keep mock substring rules from matching each other.
        char buf[8];
        std::snprintf(buf, sizeof(buf), "r%03d", i);
        const std::string id = buf;
        instances.push_back(instance(id));
        table1[id] = rng() % 2 == 0;
        table2[id] = rng() % 2 == 0;
    }

    // Brute-force oracle straight from the outcome tables.
    std::vector<std::string> expected_kept;
    std::vector<std::string> expected_discarded;
    for (const auto& p : instances) {
        if (table1.at(p.id) && table2.at(p.id)) {
            expected_discarded.push_back(p.id);
        } else {
            expected_kept.push_back(p.id);
        }
    }

    MockProvider judge1(script_for(instances, table1));
    MockProvider judge2(script_for(instances, table2));
    const FilterResult result =
        difficulty_filter(judge1, tpl(), judge2, tpl(), instances, FilterMode::BothOrders, 4);

    std::vector<std::string> kept_ids;
    for (const auto& p : result.kept) kept_ids.push_back(p.id);
    std::vector<std::string> discarded_ids;
    for (const auto& p : result.discarded) discarded_ids.push_back(p.id);

    CHECK(kept_ids == expected_kept);  // exact content and input order
    CHECK(discarded_ids == expected_discarded);
    CHECK(result.kept.size() + result.discarded.size() == instances.size());
}

TEST_CASE("both_orders demands robustness to position") {
    // A constant judge answers Output (a) regardless of order: correct on the
    // canonical ordering, wrong after the swap.
    const std::vector<PreferenceInstance> instances = {instance("pos")};
    MockScript always_a;
    always_a.default_response = "Output (a)";

    MockProvider judge1(always_a);
    MockProvider judge2(always_a);
    const FilterResult strict =
        difficulty_filter(judge1, tpl(), judge2, tpl(), instances, FilterMode::BothOrders);
    CHECK(strict.kept.size() == 1);  // not robustly correct, so not "too easy"

    MockProvider judge1_single(always_a);
    MockProvider judge2_single(always_a);
    const FilterResult lax = difficulty_filter(judge1_single, tpl(), judge2_single, tpl(),
                                               instances, FilterMode::SingleOrder);
    CHECK(lax.discarded.size() == 1);
}

TEST_CASE("weakening a judge never shrinks the kept set") {
    std::mt19937 rng(31337);
    std::vector<PreferenceInstance> instances;
    std::map<std::string, bool> strong1;
    std::map<std::string, bool> strong2;
    for (int i = 0; i < 60; ++i) {
        char buf[8];
        std::snprintf(buf, sizeof(buf), "m%03d", i);
        const std::string id = buf;
        instances.push_back(instance(id));
        strong1[id] = rng() % 2 == 0;
        strong2[id] = rng() % 2 == 0;
    }
    // Weaker judge 1: some correct verdicts flipped to incorrect.
    std::map<std::string, bool> weak1 = strong1;
    for (auto& [id, correct] : weak1)
        if (correct && rng() % 3 == 0) correct = false;

    auto kept_with = [&](const std::map<std::string, bool>& t1,
                         const std::map<std::string, bool>& t2) {
        MockProvider j1(script_for(instances, t1));
        MockProvider j2(script_for(instances, t2));
        return ids_of(
            difficulty_filter(j1, tpl(), j2, tpl(), instances, FilterMode::BothOrders).kept);
    };

    const auto kept_strong = kept_with(strong1, strong2);
    const auto kept_weak = kept_with(weak1, strong2);
    CHECK(std::includes(kept_weak.begin(), kept_weak.end(), kept_strong.begin(),
                        kept_strong.end()));
}

TEST_CASE("provider failures count as incorrect, not too-easy") {
    const std::vector<PreferenceInstance> instances = {instance("err")};
    MockScript empty;  // no rules, no default: every call fails
    MockProvider failing(empty);
    MockScript good;
    add_pick_rules(good, "err", true);
    MockProvider working(good);

    const FilterResult result =
        difficulty_filter(failing, tpl(), working, tpl(), instances, FilterMode::BothOrders);
    REQUIRE(result.outcomes.size() == 1);
    CHECK_FALSE(result.outcomes[0].judge1_correct);
    CHECK(result.outcomes[0].judge2_correct);
    CHECK(result.kept.size() == 1);
}

TEST_CASE("filter_stats reports exact counts") {
    std::vector<FilterOutcome> outcomes;
    for (int i = 0; i < 10; ++i)
        outcomes.push_back({"s" + std::to_string(i), true, i < 6, i < 6});
    const FilterStats stats = filter_stats(outcomes);
    CHECK(stats.total == 10);
    CHECK(stats.discarded == 6);
    CHECK(stats.discard_fraction == doctest::Approx(0.6));

    for (auto& o : outcomes) o.discarded = false;
    CHECK(filter_stats(outcomes).discard_fraction == doctest::Approx(0.0));
    for (auto& o : outcomes) o.discarded = true;
    CHECK(filter_stats(outcomes).discard_fraction == doctest::Approx(1.0));

    CHECK_THROWS_AS(filter_stats({}), DataError);
}
