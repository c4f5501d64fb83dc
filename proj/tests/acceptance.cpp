// Acceptance suite: runs every shipped criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "judgelab/datamodel.hpp"
#include "judgelab/difficulty.hpp"
#include "judgelab/jsonl.hpp"
#include "judgelab/judging.hpp"
#include "judgelab/merge.hpp"
#include "judgelab/metrics.hpp"
#include "judgelab/prompts.hpp"
#include "judgelab/provider.hpp"
#include "judgelab/synthesis.hpp"

using namespace judgelab;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Failure(what);
}

void require_close(double got, double want, double tol, const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
        std::ostringstream os;
        os << what << ": got " << got << ", want " << want << " +/- " << tol;
        throw Failure(os.str());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// ---------------------------------------------------------------------------
// Shared fixture builders

// An 80-item benchmark laid out 17/14/13/12/12/12 across the six categories,
// with marker outputs a scripted judge can target.
data::BenchmarkSet benchmark_80() {
    const std::vector<std::pair<data::BiasCategory, int>> layout = {
        {data::BiasCategory::Length, 17},
        {data::BiasCategory::Concreteness, 14},
        {data::BiasCategory::EmptyReference, 13},
        {data::BiasCategory::ContentContinuation, 12},
        {data::BiasCategory::NestedInstruction, 12},
        {data::BiasCategory::FamiliarKnowledge, 12},
    };
    data::BenchmarkSet set;
    set.name = "fixture-80";
    int n = 0;
    for (const auto& [category, count] : layout) {
        for (int i = 0; i < count; ++i) {
            char id[16];
            std::snprintf(id, sizeof(id), "%03d", n++);
            data::EvalItem item;
            item.instance_id = id;
            item.instruction = std::string("instruction ") + id;
            item.output_1 = std::string("GOOD ") + id;
            item.output_2 = std::string("BAD ") + id;
            item.label = data::Label::A;
            item.category = category;
            set.items.push_back(item);
        }
    }
    return set;
}

provider::MockProvider constant_a_judge() {
    provider::MockScript script;
    script.default_response = "Output (a)";
    return provider::MockProvider(script);
}

// Picks whichever position holds the GOOD marker: a deterministic,
// position-invariant judge.
provider::MockProvider good_seeking_judge(const data::BenchmarkSet& set) {
    provider::MockScript script;
    for (const auto& item : set.items) {
        script.rules.push_back({"# Output (a):\nGOOD " + item.instance_id, false, "Output (a)"});
        script.rules.push_back({"# Output (b):\nGOOD " + item.instance_id, false, "Output (b)"});
    }
    return provider::MockProvider(script);
}

// Independent extended-precision slerp reference (long double throughout).
std::vector<double> slerp_reference(const std::vector<double>& a, const std::vector<double>& b,
                                    long double t) {
    long double na = 0.0L;
    long double nb = 0.0L;
    long double dot = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) {
        na += static_cast<long double>(a[i]) * a[i];
        nb += static_cast<long double>(b[i]) * b[i];
        dot += static_cast<long double>(a[i]) * b[i];
    }
    na = sqrtl(na);
    nb = sqrtl(nb);
    long double c = dot / (na * nb);
    if (c > 1.0L) c = 1.0L;
    if (c < -1.0L) c = -1.0L;
    std::vector<double> out(a.size());
    if (fabsl(c) >= 1.0L - 1e-7L) {
        for (std::size_t i = 0; i < a.size(); ++i)
            out[i] = static_cast<double>((1.0L - t) * a[i] + t * b[i]);
        return out;
    }
    const long double omega = acosl(c);
    const long double wa = sinl((1.0L - t) * omega) / sinl(omega);
    const long double wb = sinl(t * omega) / sinl(omega);
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = static_cast<double>(wa * a[i] + wb * b[i]);
    return out;
}

// ---------------------------------------------------------------------------
// Criteria

void criterion_macro_average() {
    const auto start = std::chrono::steady_clock::now();
    const double strong = metrics::llmbar_macro_average(
        {{"neighbor", 0.791}, {"gptinst", 0.864}, {"gptout", 0.745}, {"manual", 0.761}});
    require_close(round_percent1(strong), 79.0, 0.05, "macro average of strong row");
    const double base = metrics::llmbar_macro_average(
        {{"neighbor", 0.642}, {"gptinst", 0.734}, {"gptout", 0.596}, {"manual", 0.576}});
    require_close(round_percent1(base), 63.7, 0.05, "macro average of base row");
    const double elapsed = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - start).count();
    require(elapsed < 1.0, "macro-average runtime exceeded 1s");
}

void criterion_micro_average() {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<std::pair<data::BiasCategory, std::pair<int, int>>> layout = {
        {data::BiasCategory::Length, {31, 34}},
        {data::BiasCategory::Concreteness, {26, 28}},
        {data::BiasCategory::EmptyReference, {13, 26}},
        {data::BiasCategory::ContentContinuation, {24, 24}},
        {data::BiasCategory::NestedInstruction, {22, 24}},
        {data::BiasCategory::FamiliarKnowledge, {23, 24}},
    };
    std::vector<judging::JudgeRecord> records;
    int n = 0;
    for (const auto& [category, counts] : layout) {
        for (int i = 0; i < counts.second; ++i) {
            judging::JudgeRecord r;
            r.instance_id = "m" + std::to_string(n++);
            r.correct = i < counts.first;
            r.category = category;
            r.good_len = r.bad_len = 10;
            records.push_back(r);
        }
    }
    require(records.size() == 160, "fixture must hold 160 records");
    require_close(round_percent1(metrics::micro_average(records)), 86.9, 0.05, "micro average");
    const double elapsed = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - start).count();
    require(elapsed < 1.0, "micro-average runtime exceeded 1s");
}

void criterion_swap_doubling() {
    const data::BenchmarkSet set = benchmark_80();
    require(set.items.size() == 80, "fixture must hold 80 items");
    auto judge = constant_a_judge();
    const auto records = judging::judge_set(
        judge, judging::PromptTemplate::builtin(judging::TemplateId::GeneralSingle), set, 4,
        /*swap=*/true);
    require(records.size() == 160, "swap-doubled run must yield exactly 160 records");

    std::map<std::string, std::size_t> before;
    for (const auto& item : set.items)
        ++before[std::string(data::to_string(*item.category))];
    std::map<std::string, std::size_t> after;
    for (const auto& rec : records) ++after[std::string(data::to_string(*rec.category))];
    for (const auto& [category, count] : before) {
        require(after[category] == 2 * count,
                "category " + category + " must double exactly");
    }
    require(after.at("length") == 34, "length category must double 17 -> 34");
}

void criterion_position_bias_extremes() {
    const data::BenchmarkSet set = benchmark_80();

    auto constant = constant_a_judge();
    const auto tpl = judging::PromptTemplate::builtin(judging::TemplateId::GeneralSingle);
    const auto constant_records = judging::judge_set(constant, tpl, set, 4, true);
    require(metrics::accuracy(constant_records) == 0.5,
            "constant judge accuracy must be exactly 0.500");
    require(metrics::positional_agreement(constant_records) == 0.0,
            "constant judge agreement must be exactly 0.000");

    auto invariant = good_seeking_judge(set);
    const auto invariant_records = judging::judge_set(invariant, tpl, set, 4, true);
    require(metrics::positional_agreement(invariant_records) == 1.0,
            "position-invariant judge agreement must be exactly 1.000");
    require(metrics::accuracy(invariant_records) == 1.0,
            "good-seeking judge accuracy must be exactly 1.000");
}

void criterion_synthesis_determinism() {
    const auto start = std::chrono::steady_clock::now();

    std::vector<synthesis::SynthesisInput> inputs;
    for (int i = 0; i < 50; ++i) {
        char id[8];
        std::snprintf(id, sizeof(id), "s%03d", i);
        inputs.push_back({id, std::string("instruction ") + id,
                          std::string("reference answer ") + id});
    }

    provider::MockScript strong_script;
    strong_script.rules.push_back({"Generated input:", false, "a similar instruction"});
    strong_script.default_response = "an off-topic but fancy answer";
    provider::MockScript weak_script;
    weak_script.default_response = "a plain answer";
    provider::MockScript distinct_script;  // every fourth instruction is "the same thing"
    distinct_script.rules.push_back({"s000\n", false, "YES"});
    distinct_script.rules.push_back({"s004\n", false, "YES"});
    distinct_script.rules.push_back({"s008\n", false, "YES"});
    distinct_script.default_response = "NO";

    auto offtopic_once = [&] {
        provider::MockProvider weak(weak_script);
        provider::MockProvider strong(strong_script);
        provider::MockProvider judge(distinct_script);
        return synthesis::run_offtopic(weak, strong, judge, inputs,
                                       {"accept", "mock-weak", "mock-strong"}, 4);
    };

    provider::MockScript gen_script;
    gen_script.default_response = "## Explanation:\nwrong on purpose\n## Response:\na wrong answer";
    provider::MockScript correct_script;  // every tenth candidate is accidentally correct
    correct_script.rules.push_back({"s005\n", false, "YES"});
    correct_script.rules.push_back({"s015\n", false, "YES"});
    correct_script.default_response = "NO";

    auto erroneous_once = [&] {
        provider::MockProvider gen(gen_script);
        provider::MockProvider judge(correct_script);
        return synthesis::run_erroneous(gen, judge, inputs, 7, {"accept", "reference", "mock"}, 4);
    };

    auto bytes = [](const auto& items) {
        std::vector<nlohmann::json> raw;
        for (const auto& item : items) raw.push_back(nlohmann::json(item));
        return to_jsonl_string(raw);
    };

    const auto off1 = offtopic_once();
    const auto off2 = offtopic_once();
    require(bytes(off1.kept) == bytes(off2.kept), "off-topic kept output must be byte-identical");
    require(bytes(off1.audit) == bytes(off2.audit),
            "off-topic audit output must be byte-identical");

    const auto err1 = erroneous_once();
    const auto err2 = erroneous_once();
    require(bytes(err1.kept) == bytes(err2.kept), "erroneous kept output must be byte-identical");
    require(bytes(err1.audit) == bytes(err2.audit),
            "erroneous audit output must be byte-identical");

    for (const auto* run : {&off1, &err1}) {
        std::set<std::string> kept_ids;
        for (const auto& p : run->kept) kept_ids.insert(p.id);
        for (const auto& rec : run->audit) {
            require(rec.kept == !rec.rejection_reason.has_value(),
                    "kept flag must mirror the rejection reason");
            if (rec.rejection_reason) {
                require(kept_ids.count(rec.id) == 0,
                        "rejected candidate " + rec.id + " must not be kept");
            }
        }
    }
    require(off1.audit.size() == 50 && off1.kept.size() == 47,
            "off-topic run must reject the three scripted not-distinct items");
    require(err1.audit.size() == 50 && err1.kept.size() == 48,
            "erroneous run must reject the two scripted correct candidates");

    const double elapsed = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - start).count();
    require(elapsed < 10.0, "synthesis determinism runtime exceeded 10s");
}

void criterion_difficulty_filter_oracle() {
    const auto tpl = judging::PromptTemplate::builtin(judging::TemplateId::GeneralSingle);

    auto pref = [](const std::string& id) {
        data::PreferenceInstance p;
        p.id = id;
        p.instruction = "INSTR " + id;
        p.good_response = "GOOD " + id;
        p.bad_response = "BAD " + id;
        return p;
    };
    auto script_for = [](const std::vector<data::PreferenceInstance>& instances,
                         const std::map<std::string, bool>& table) {
        provider::MockScript script;
        for (const auto& p : instances) {
            const std::string target = (table.at(p.id) ? "GOOD " : "BAD ") + p.id;
            script.rules.push_back({"# Output (a):\n" + target, false, "Output (a)"});
            script.rules.push_back({"# Output (b):\n" + target, false, "Output (b)"});
        }
        return script;
    };

    // Exhaustive 4-combination fixture.
    const std::vector<data::PreferenceInstance> combos = {pref("tt"), pref("tf"), pref("ft"),
                                                          pref("ff")};
    const std::map<std::string, bool> t1 = {
        {"tt", true}, {"tf", true}, {"ft", false}, {"ff", false}};
    const std::map<std::string, bool> t2 = {
        {"tt", true}, {"tf", false}, {"ft", true}, {"ff", false}};
    provider::MockProvider j1(script_for(combos, t1));
    provider::MockProvider j2(script_for(combos, t2));
    const auto exhaustive = difficulty::difficulty_filter(j1, tpl, j2, tpl, combos,
                                                          difficulty::FilterMode::BothOrders);
    require(exhaustive.discarded.size() == 1 && exhaustive.discarded[0].id == "tt",
            "only the both-correct combination may be discarded");
    require(exhaustive.kept.size() == 3, "the other three combinations must be kept");

    // Randomized 100-instance fixture against the brute-force oracle.
    std::mt19937 rng(20240506);
    std::vector<data::PreferenceInstance> instances;
    std::map<std::string, bool> r1;
    std::map<std::string, bool> r2;
    for (int i = 0; i < 100; ++i) {
        char id[8];
        std::snprintf(id, sizeof(id), "r%03d", i);
        instances.push_back(pref(id));
        r1[id] = rng() % 2 == 0;
        r2[id] = rng() % 2 == 0;
    }
    std::vector<std::string> oracle_kept;
    for (const auto& p : instances)
        if (!(r1.at(p.id) && r2.at(p.id))) oracle_kept.push_back(p.id);

    provider::MockProvider rj1(script_for(instances, r1));
    provider::MockProvider rj2(script_for(instances, r2));
    const auto randomized = difficulty::difficulty_filter(rj1, tpl, rj2, tpl, instances,
                                                          difficulty::FilterMode::BothOrders, 4);
    std::vector<std::string> got_kept;
    for (const auto& p : randomized.kept) got_kept.push_back(p.id);
    require(got_kept == oracle_kept, "kept set must match the brute-force oracle exactly");
}

void criterion_slerp() {
    std::mt19937 rng(20240507);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    auto random_vec = [&](int dim) {
        Eigen::VectorXd v(dim);
        do {
            for (int i = 0; i < dim; ++i) v[i] = dist(rng);
        } while (v.norm() < 1e-3);
        return v;
    };

    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::VectorXd a = random_vec(8);
        const Eigen::VectorXd b = random_vec(8);
        const Eigen::VectorXd at0 = merge::slerp(a, b, 0.0);
        const Eigen::VectorXd at1 = merge::slerp(a, b, 1.0);
        for (int i = 0; i < 8; ++i) {
            require(at0[i] == a[i], "slerp(a,b,0) must equal a exactly");
            require(at1[i] == b[i], "slerp(a,b,1) must equal b exactly");
        }
    }

    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(2);
    Eigen::VectorXd e2 = Eigen::VectorXd::Zero(2);
    e1[0] = 1.0;
    e2[1] = 1.0;
    const Eigen::VectorXd mid = merge::slerp(e1, e2, 0.5);
    const double root_half = std::sqrt(2.0) / 2.0;
    require(std::abs(mid[0] - root_half) < 1e-9 && std::abs(mid[1] - root_half) < 1e-9,
            "orthogonal unit midpoint must hit (sqrt2/2, sqrt2/2) within 1e-9");

    for (int trial = 0; trial < 1000; ++trial) {
        const int dim = 2 + static_cast<int>(rng() % 15);
        const Eigen::VectorXd a = random_vec(dim);
        const Eigen::VectorXd b = random_vec(dim);
        const double t = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const Eigen::VectorXd lhs = merge::slerp(a, b, t);
        const Eigen::VectorXd rhs = merge::slerp(b, a, 1.0 - t);
        require((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12,
                "slerp(a,b,t) must equal slerp(b,a,1-t) within 1e-12");
    }

    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::VectorXd a = random_vec(6).normalized();
        const Eigen::VectorXd b = random_vec(6).normalized();
        for (double t = 0.0; t <= 1.0001; t += 0.1) {
            require(std::abs(merge::slerp(a, b, t).norm() - 1.0) < 1e-9,
                    "unit-norm inputs must stay unit within 1e-9");
        }
    }

    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::VectorXd a = random_vec(16);
        const Eigen::VectorXd b = random_vec(16);
        const double t = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const Eigen::VectorXd got = merge::slerp(a, b, t);
        const auto expected =
            slerp_reference(std::vector<double>(a.data(), a.data() + 16),
                            std::vector<double>(b.data(), b.data() + 16),
                            static_cast<long double>(t));
        for (int i = 0; i < 16; ++i)
            require(std::abs(got[i] - expected[i]) < 1e-10,
                    "slerp must match the extended-precision oracle within 1e-10");
    }

    require(merge::MergeConfig{}.t == 0.5, "default merge ratio must be 0.5");
}

void criterion_length_analytics() {
    // Hand-enumerated ratio fixture (see derivation in the unit suite).
    auto rec = [](bool correct, std::size_t good_len, std::size_t bad_len, const char* id) {
        judging::JudgeRecord r;
        r.instance_id = id;
        r.correct = correct;
        r.good_len = good_len;
        r.bad_len = bad_len;
        return r;
    };
    const std::vector<judging::JudgeRecord> fixture = {
        rec(true, 100, 40, "f1"),  rec(true, 100, 50, "f2"),  rec(false, 100, 100, "f3"),
        rec(true, 100, 120, "f4"), rec(false, 100, 160, "f5"), rec(true, 100, 200, "f6"),
        rec(false, 100, 250, "f7"), rec(false, 100, 400, "f8"),
    };
    const auto table = metrics::length_ratio_buckets(fixture);
    const std::vector<std::size_t> counts = {1, 1, 2, 1, 2, 1};
    const std::vector<double> accuracy = {1.0, 1.0, 0.5, 0.0, 0.5, 0.0};
    require(table.buckets.size() == 6, "default edges must give six buckets");
    for (std::size_t i = 0; i < 6; ++i) {
        require(table.buckets[i].count == counts[i], "bucket count must match enumeration");
        require(table.buckets[i].accuracy.has_value() &&
                    *table.buckets[i].accuracy == accuracy[i],
                "bucket accuracy must match enumeration exactly");
    }

    data::PreferenceInstance negative;
    negative.id = "n";
    negative.instruction = "i";
    negative.good_response = std::string(100, 'g');
    negative.bad_response = std::string(400, 'b');  // difference -300
    const auto bins = metrics::length_difference_histogram({negative}, 500);
    require(bins.size() == 1 && bins[0].lo == -500 && bins[0].hi == 0 && bins[0].count == 1,
            "a -300 difference must land in bin [-500, 0)");

    std::vector<data::PreferenceInstance> corpus;
    for (int i = 0; i < 60; ++i) {
        data::PreferenceInstance p;
        p.id = "c" + std::to_string(i);
        p.instruction = "i";
        p.good_response = std::string(120 + (i % 5) * 40, 'g');
        p.bad_response = std::string(i % 6 == 0 ? 80 : 600 + i * 13, 'b');
        corpus.push_back(p);
    }
    std::size_t negative_mass = 0;
    std::size_t total = 0;
    for (const auto& bin : metrics::length_difference_histogram(corpus, 500)) {
        total += bin.count;
        if (bin.hi <= 0) negative_mass += bin.count;
    }
    require(total == corpus.size(), "histogram mass must equal the corpus size");
    require(negative_mass > total / 2,
            "a longer-bad corpus must put the majority of mass in negative bins");
}

void criterion_prompt_fidelity() {
    const std::string resources = std::string(JUDGELAB_RESOURCES_DIR) + "/prompts/";
    const std::map<std::string, std::map<std::string, std::string>> cases = {
        {"offtopic_similar_instruction", {{"instruction", "Summarize this article"}}},
        {"offtopic_distinct_check",
         {{"instruction_A", "Summarize this"}, {"instruction_B", "Paraphrase this"}}},
        {"erroneous_wrong_fact", {{"instruction", "Describe a type of bird"}}},
        {"erroneous_incomplete", {{"instruction", "Describe a type of bird"}}},
        {"erroneous_irrelevant", {{"instruction", "Describe a type of bird"}}},
        {"erroneous_omit_necessary", {{"instruction", "Describe a type of bird"}}},
        {"erroneous_deviate", {{"instruction", "Describe a type of bird"}}},
        {"erroneous_correctness_check",
         {{"instruction", "Describe a bird"}, {"response", "A kookaburra lives in Korea."}}},
        {"judge_general_single",
         {{"instruction", "Pick a fruit"}, {"output_1", "Apple"}, {"output_2", "Rock"}}},
        {"judge_safety_single",
         {{"instruction", "Pick a fruit"}, {"output_1", "Apple"}, {"output_2", "Rock"}}},
        {"judge_general_multi",
         {{"conversation", "Human: hello"}, {"output_1", "Hi"}, {"output_2", "Go away"}}},
        {"judge_safety_multi",
         {{"conversation", "Human: hello"}, {"output_1", "Hi"}, {"output_2", "Go away"}}},
    };

    for (const auto& [name, values] : cases) {
        const std::string file_body = read_file(resources + name + ".txt");
        require(file_body == std::string(prompts::body(name)),
                "embedded body must equal the resource file for " + name);

        // Independent substitution route: plain find/replace on file bytes.
        std::string expected = file_body;
        for (const auto& [key, value] : values) {
            const std::string token = "{" + key + "}";
            const auto pos = expected.find(token);
            require(pos != std::string::npos, "resource must contain " + token);
            expected.replace(pos, token.size(), value);
        }
        const std::string rendered = prompts::render(prompts::body(name), values);
        require(rendered == expected, "rendered prompt must match the file route for " + name);
        require(fnv1a64(rendered) == fnv1a64(expected),
                "rendered prompt hash must match for " + name);
    }
}

void criterion_benchmark_validation() {
    data::EvalItem over;
    over.instance_id = "over";
    over.instruction = "inst";
    over.output_1 = std::string(100, 'g');
    over.output_2 = std::string(240, 'b');  // ratio 2.4
    over.label = data::Label::A;
    over.category = data::BiasCategory::Concreteness;

    data::EvalItem exempt = over;
    exempt.instance_id = "exempt";
    exempt.category = data::BiasCategory::Length;

    data::BenchmarkSet set;
    set.items = {over, exempt};
    const auto reports = data::validate_bench(set);
    require(reports.size() == 2, "two reports expected");
    require(!reports[0].passed && reports[0].violations.size() == 1 &&
                reports[0].violations[0].rule == "length_ratio",
            "a 2.4-ratio concreteness item must fail with a length_ratio violation");
    require(reports[1].passed, "the same ratio in a length-category item must pass");
}

}  // namespace

int main() {
    struct Criterion {
        int number;
        const char* description;
        std::function<void()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "macro-average arithmetic", criterion_macro_average},
        {2, "micro-average arithmetic", criterion_micro_average},
        {3, "swap-doubling of an 80-item benchmark", criterion_swap_doubling},
        {4, "position-bias extremes", criterion_position_bias_extremes},
        {5, "synthesis determinism and audit flags", criterion_synthesis_determinism},
        {6, "difficulty-filter oracle", criterion_difficulty_filter_oracle},
        {7, "slerp numerical contract", criterion_slerp},
        {8, "length analytics", criterion_length_analytics},
        {9, "prompt fidelity", criterion_prompt_fidelity},
        {10, "benchmark validation", criterion_benchmark_validation},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string error;
        try {
            criterion.run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double elapsed = std::chrono::duration<double>(
            std::chrono::steady_clock::now() - start).count();
        if (error.empty()) {
            std::printf("[PASS] criterion %2d: %s (%.2fs)\n", criterion.number,
                        criterion.description, elapsed);
        } else {
            ++failures;
            std::printf("[FAIL] criterion %2d: %s: %s\n", criterion.number,
                        criterion.description, error.c_str());
        }
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
