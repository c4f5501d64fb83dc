// judgelab: meta-evaluate pairwise judge models and build bias-offsetting
// preference data. One subcommand per pipeline; every file-producing run
// writes a manifest sufficient to reproduce it.

#include <algorithm>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "judgelab/datamodel.hpp"
#include "judgelab/difficulty.hpp"
#include "judgelab/jsonl.hpp"
#include "judgelab/judging.hpp"
#include "judgelab/merge.hpp"
#include "judgelab/metrics.hpp"
#include "judgelab/prompts.hpp"
#include "judgelab/provider.hpp"
#include "judgelab/synthesis.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace judgelab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitProvider = 3;

struct RunConfig {
    std::map<std::string, provider::ProviderConfig> providers;  // role -> config
    std::map<std::string, std::string> templates;               // dataset -> template id
    std::optional<std::uint64_t> seed;
    std::optional<int> parallelism;
};

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }

    RunConfig cfg;
    const fs::path base = fs::path(path).parent_path();
    const json providers = j.value("providers", json::object());
    for (const auto& [role, value] : providers.items()) {
        if (value.is_string()) {
            cfg.providers[role] =
                provider::load_provider_config((base / value.get<std::string>()).string());
        } else {
            cfg.providers[role] = provider::provider_config_from_json(value);
        }
    }
    const json templates = j.value("templates", json::object());
    for (const auto& [dataset, tpl] : templates.items())
        cfg.templates[dataset] = tpl.get<std::string>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("parallelism")) cfg.parallelism = j.at("parallelism").get<int>();
    return cfg;
}

// Resolve a provider for `role`: an explicit --<role> path wins over the
// config entry.
provider::ProviderConfig resolve_provider(const RunConfig& cfg, const std::string& role,
                                          const std::string& flag_path) {
    if (!flag_path.empty()) return provider::load_provider_config(flag_path);
    const auto it = cfg.providers.find(role);
    if (it == cfg.providers.end())
        throw ConfigError("no provider for role '" + role +
                          "': pass a provider config file or add it to --config");
    return it->second;
}

json provider_brief(const provider::ProviderConfig& cfg) {
    json j = {{"kind", cfg.kind == provider::ProviderKind::Http ? "http" : "mock"},
              {"model_name", cfg.model_name}};
    if (!cfg.base_url.empty()) j["base_url"] = cfg.base_url;
    return j;
}

std::string utc_now() {
    char buf[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct ManifestWriter {
    std::string command;
    json options = json::object();
    std::vector<std::string> outputs;
    std::string started = utc_now();

    void write(const std::string& explicit_path) const {
        if (outputs.empty() && explicit_path.empty()) return;
        const std::string path =
            explicit_path.empty() ? outputs.front() + ".manifest.json" : explicit_path;
        json j;
        j["command"] = command;
        j["options"] = options;
        j["config_hash"] = fnv1a64_hex(options.dump());
        j["prompt_hashes"] = prompts::all_hashes();
        j["outputs"] = outputs;
        j["started_utc"] = started;
        j["finished_utc"] = utc_now();
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw DataError("cannot write manifest: " + path);
        out << j.dump(2) << '\n';
    }
};

int run_validate(const std::string& bench_path) {
    const data::BenchmarkSet set = data::load_benchmark(bench_path);
    const auto reports = data::validate_bench(set);
    std::size_t violations = 0;
    for (const auto& rep : reports) {
        for (const auto& v : rep.violations) {
            ++violations;
            std::cout << rep.item_id << ": " << v.rule << ": " << v.detail << "\n";
        }
    }
    std::cout << set.items.size() << " items, " << violations << " violation"
              << (violations == 1 ? "" : "s") << "\n";
    return violations == 0 ? kExitOk : kExitData;
}

judging::PromptTemplate template_for(const RunConfig& cfg, const std::string& flag_id,
                                     const std::string& dataset) {
    std::string id = flag_id;
    if (id.empty()) {
        const auto by_dataset = cfg.templates.find(dataset);
        if (by_dataset != cfg.templates.end()) {
            id = by_dataset->second;
        } else {
            const auto fallback = cfg.templates.find("default");
            id = fallback != cfg.templates.end() ? fallback->second : "general_single";
        }
    }
    return judging::PromptTemplate::builtin(judging::parse_template_id(id));
}

int run_evaluate(const RunConfig& cfg, const std::string& bench_path,
                 const std::string& judge_path, const std::string& template_id, bool swap,
                 int parallelism, bool strict, bool force, const std::string& out_path,
                 const std::string& report_json_path, ManifestWriter& manifest) {
    data::BenchmarkSet set = data::load_benchmark(bench_path);
    if (!force) {
        const auto reports = data::validate_bench(set);
        std::size_t violations = 0;
        for (const auto& rep : reports) {
            for (const auto& v : rep.violations) {
                ++violations;
                std::cerr << rep.item_id << ": " << v.rule << ": " << v.detail << "\n";
            }
        }
        if (violations > 0) {
            std::cerr << "benchmark failed validation (" << violations
                      << " violations); use --force to evaluate anyway\n";
            return kExitData;
        }
    }

    const auto provider_cfg = resolve_provider(cfg, "judge", judge_path);
    manifest.options["providers"]["judge"] = provider_brief(provider_cfg);
    auto judge = provider::make_provider(provider_cfg);

    // Items may use different templates per source dataset; group and merge.
    std::map<std::string, data::BenchmarkSet> by_template;
    for (const auto& item : set.items) {
        const auto tpl = template_for(cfg, template_id, item.source_dataset);
        by_template[tpl.name].items.push_back(item);
    }
    std::vector<judging::JudgeRecord> records;
    for (auto& [tpl_name, subset] : by_template) {
        const auto tpl =
            judging::PromptTemplate::builtin(judging::parse_template_id(tpl_name));
        auto part = judging::judge_set(*judge, tpl, subset, parallelism, swap, strict);
        records.insert(records.end(), part.begin(), part.end());
    }
    std::stable_sort(records.begin(), records.end(),
                     [](const judging::JudgeRecord& a, const judging::JudgeRecord& b) {
                         if (a.instance_id != b.instance_id)
                             return a.instance_id < b.instance_id;
                         return a.swapped < b.swapped;
                     });

    write_jsonl(out_path, records);
    manifest.outputs.push_back(out_path);

    const auto report = metrics::compute_report(records);
    std::cout << metrics::report_text(report);
    if (!report_json_path.empty()) {
        std::ofstream out(report_json_path, std::ios::trunc);
        if (!out) throw DataError("cannot write " + report_json_path);
        out << metrics::report_json(report).dump(2) << '\n';
        manifest.outputs.push_back(report_json_path);
    }
    return kExitOk;
}

int run_agreement(const std::string& records_path) {
    const auto records = read_jsonl<judging::JudgeRecord>(records_path);
    const double agreement = metrics::positional_agreement(records);
    std::cout << "positional_agreement " << format_percent1(agreement) << "% ("
              << agreement << ")\n";
    return kExitOk;
}

std::vector<double> parse_edges(const std::string& spec) {
    std::vector<double> edges;
    std::string token;
    std::istringstream ss(spec);
    while (std::getline(ss, token, ',')) {
        if (token == "inf" || token == "+inf") {
            edges.push_back(std::numeric_limits<double>::infinity());
        } else {
            edges.push_back(std::stod(token));
        }
    }
    return edges;
}

int run_lenratio(const std::string& records_path, const std::string& edges_spec,
                 const std::string& csv_path, const std::string& json_path,
                 ManifestWriter& manifest) {
    const auto records = read_jsonl<judging::JudgeRecord>(records_path);
    const auto edges =
        edges_spec.empty() ? metrics::default_ratio_edges() : parse_edges(edges_spec);
    const auto table = metrics::length_ratio_buckets(records, edges);
    std::cout << metrics::bucket_table_text(table);
    if (!csv_path.empty()) {
        std::ofstream out(csv_path, std::ios::trunc);
        out << metrics::bucket_table_csv(table);
        manifest.outputs.push_back(csv_path);
    }
    if (!json_path.empty()) {
        std::ofstream out(json_path, std::ios::trunc);
        out << metrics::bucket_table_json(table).dump(2) << '\n';
        manifest.outputs.push_back(json_path);
    }
    return kExitOk;
}

int run_lenhist(const std::string& data_path, long long bin_width, const std::string& csv_path,
                const std::string& json_path, ManifestWriter& manifest) {
    const auto instances = read_jsonl<data::PreferenceInstance>(data_path);
    const auto bins = metrics::length_difference_histogram(instances, bin_width);
    std::cout << metrics::histogram_text(bins);
    if (!csv_path.empty()) {
        std::ofstream out(csv_path, std::ios::trunc);
        out << metrics::histogram_csv(bins);
        manifest.outputs.push_back(csv_path);
    }
    if (!json_path.empty()) {
        std::ofstream out(json_path, std::ios::trunc);
        out << metrics::histogram_json(bins).dump(2) << '\n';
        manifest.outputs.push_back(json_path);
    }
    return kExitOk;
}

void write_synthesis_outputs(const synthesis::SynthesisRun& run, const std::string& out_path,
                             const std::string& audit_path, ManifestWriter& manifest) {
    write_jsonl(out_path, run.kept);
    manifest.outputs.push_back(out_path);
    if (!audit_path.empty()) {
        write_jsonl(audit_path, run.audit);
        manifest.outputs.push_back(audit_path);
    }
    std::size_t rejected = run.audit.size() - run.kept.size();
    std::cout << "kept " << run.kept.size() << " of " << run.audit.size() << " ("
              << rejected << " rejected)\n";
}

int run_synth_offtopic(const RunConfig& cfg, const std::string& input_path,
                       const std::string& weak_path, const std::string& strong_path,
                       const std::string& judge_path, const std::string& source_dataset,
                       int parallelism, const std::string& out_path,
                       const std::string& audit_path, ManifestWriter& manifest) {
    const auto inputs = read_jsonl<synthesis::SynthesisInput>(input_path);
    const auto weak_cfg = resolve_provider(cfg, "weak", weak_path);
    const auto strong_cfg = resolve_provider(cfg, "strong", strong_path);
    const auto judge_cfg = resolve_provider(cfg, "judge", judge_path);
    manifest.options["providers"]["weak"] = provider_brief(weak_cfg);
    manifest.options["providers"]["strong"] = provider_brief(strong_cfg);
    manifest.options["providers"]["judge"] = provider_brief(judge_cfg);
    auto weak = provider::make_provider(weak_cfg);
    auto strong = provider::make_provider(strong_cfg);
    auto judge = provider::make_provider(judge_cfg);

    synthesis::RunLabels labels;
    labels.source_dataset = source_dataset;
    labels.generator_good = weak_cfg.model_name.empty() ? "weak" : weak_cfg.model_name;
    labels.generator_bad = strong_cfg.model_name.empty() ? "strong" : strong_cfg.model_name;

    const auto run =
        synthesis::run_offtopic(*weak, *strong, *judge, inputs, labels, parallelism);
    write_synthesis_outputs(run, out_path, audit_path, manifest);
    return kExitOk;
}

int run_synth_erroneous(const RunConfig& cfg, const std::string& input_path,
                        const std::string& gen_path, const std::string& judge_path,
                        std::uint64_t seed, const std::string& source_dataset, int parallelism,
                        const std::string& out_path, const std::string& audit_path,
                        ManifestWriter& manifest) {
    const auto inputs = read_jsonl<synthesis::SynthesisInput>(input_path);
    const auto gen_cfg = resolve_provider(cfg, "strong", gen_path);
    const auto judge_cfg = resolve_provider(cfg, "judge", judge_path);
    manifest.options["providers"]["strong"] = provider_brief(gen_cfg);
    manifest.options["providers"]["judge"] = provider_brief(judge_cfg);
    auto gen = provider::make_provider(gen_cfg);
    auto judge = provider::make_provider(judge_cfg);

    synthesis::RunLabels labels;
    labels.source_dataset = source_dataset;
    labels.generator_good = "reference";
    labels.generator_bad = gen_cfg.model_name.empty() ? "strong" : gen_cfg.model_name;

    const auto run =
        synthesis::run_erroneous(*gen, *judge, inputs, seed, labels, parallelism);
    write_synthesis_outputs(run, out_path, audit_path, manifest);
    return kExitOk;
}

int run_filter(const RunConfig& cfg, const std::string& input_path,
               const std::string& judge1_path, const std::string& judge2_path,
               const std::string& mode_name, const std::string& template_id, int parallelism,
               const std::string& kept_path, const std::string& discarded_path,
               const std::string& stats_path, ManifestWriter& manifest) {
    const auto instances = read_jsonl<data::PreferenceInstance>(input_path);
    const auto judge1_cfg = resolve_provider(cfg, "filter_judge", judge1_path);
    const auto judge2_cfg = resolve_provider(cfg, "judge2", judge2_path);
    manifest.options["providers"]["filter_judge"] = provider_brief(judge1_cfg);
    manifest.options["providers"]["judge2"] = provider_brief(judge2_cfg);
    auto judge1 = provider::make_provider(judge1_cfg);
    auto judge2 = provider::make_provider(judge2_cfg);

    const auto tpl = judging::PromptTemplate::builtin(judging::parse_template_id(
        template_id.empty() ? "general_single" : template_id));
    const auto mode = difficulty::parse_filter_mode(mode_name);

    const auto result =
        difficulty::difficulty_filter(*judge1, tpl, *judge2, tpl, instances, mode, parallelism);

    write_jsonl(kept_path, result.kept);
    manifest.outputs.push_back(kept_path);
    if (!discarded_path.empty()) {
        write_jsonl(discarded_path, result.discarded);
        manifest.outputs.push_back(discarded_path);
    }
    if (!stats_path.empty()) {
        std::ofstream out(stats_path, std::ios::trunc);
        if (!out) throw DataError("cannot write " + stats_path);
        out << json(result.stats).dump(2) << '\n';
        manifest.outputs.push_back(stats_path);
    }
    std::cout << "kept " << result.kept.size() << ", discarded " << result.discarded.size()
              << " (fraction " << result.stats.discard_fraction << ")\n";
    return kExitOk;
}

int run_merge(const std::string& a_path, const std::string& b_path, double t, double threshold,
              const std::string& out_path, ManifestWriter& manifest) {
    const auto a = merge::load_weights(a_path);
    const auto b = merge::load_weights(b_path);
    merge::MergeConfig cfg;
    cfg.t = t;
    cfg.parallel_threshold = threshold;
    const auto merged = merge::merge_checkpoints(a, b, cfg);
    merge::save_weights(merged, out_path);
    manifest.outputs.push_back(out_path);
    std::cout << "merged " << merged.tensors.size() << " tensors at t=" << t << " into "
              << out_path << "\n";
    return kExitOk;
}

int run_report(const std::string& records_path, const std::string& json_path,
               const std::string& macro_spec, ManifestWriter& manifest) {
    std::optional<std::map<std::string, double>> llmbar;
    if (!macro_spec.empty()) {
        const auto values = parse_edges(macro_spec);  // plain comma-separated floats
        if (values.size() != 4)
            throw ConfigError("--macro wants four comma-separated percentages "
                              "(neighbor,gptinst,gptout,manual)");
        llmbar = std::map<std::string, double>{{"neighbor", values[0] / 100.0},
                                               {"gptinst", values[1] / 100.0},
                                               {"gptout", values[2] / 100.0},
                                               {"manual", values[3] / 100.0}};
    }

    if (records_path.empty()) {
        if (!llmbar) throw ConfigError("report needs --records and/or --macro");
        std::cout << "macro_average "
                  << format_percent1(metrics::llmbar_macro_average(*llmbar)) << "%\n";
        return kExitOk;
    }

    const auto records = read_jsonl<judging::JudgeRecord>(records_path);
    const auto report = metrics::compute_report(records, llmbar);
    std::cout << metrics::report_text(report);
    if (!json_path.empty()) {
        std::ofstream out(json_path, std::ios::trunc);
        if (!out) throw DataError("cannot write " + json_path);
        out << metrics::report_json(report).dump(2) << '\n';
        manifest.outputs.push_back(json_path);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"judgelab: pairwise judge meta-evaluation and "
                 "bias-offsetting data synthesis"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "run config JSON (providers per role, templates, seed)");

    std::string bench, records, input, out, audit, report_json_path, csv, json_out, stats;
    std::string judge, weak, strong, judge1, judge2, gen;
    std::string template_id, mode = "both_orders", edges, macro, source_dataset = "unspecified";
    std::string manifest_path;
    bool swap = true;
    bool strict = false;
    bool force = false;
    int parallelism = 1;
    std::uint64_t seed = 0;
    bool seed_set = false;
    long long bin_width = 500;
    double t = 0.5;
    double threshold = 1.0 - 1e-7;
    std::string merge_a, merge_b;

    auto* validate_cmd = app.add_subcommand("validate", "check a benchmark file");
    validate_cmd->add_option("--bench", bench, "benchmark JSONL")->required();

    auto* evaluate_cmd = app.add_subcommand("evaluate", "judge a benchmark and report metrics");
    evaluate_cmd->add_option("--bench", bench, "benchmark JSONL")->required();
    evaluate_cmd->add_option("--judge", judge, "judge provider config JSON");
    evaluate_cmd->add_option("--template", template_id,
                             "general_single|safety_single|general_multi|safety_multi");
    evaluate_cmd->add_flag("--swap,!--no-swap", swap, "double the set by swapping positions");
    evaluate_cmd->add_option("--parallelism", parallelism)->check(CLI::PositiveNumber);
    evaluate_cmd->add_flag("--strict", strict, "fail on provider errors instead of recording them");
    evaluate_cmd->add_flag("--force", force, "evaluate even if validation fails");
    evaluate_cmd->add_option("--out", out, "judge records JSONL")->required();
    evaluate_cmd->add_option("--report-json", report_json_path, "metric report JSON");

    auto* agreement_cmd = app.add_subcommand("agreement", "positional agreement of judge records");
    agreement_cmd->add_option("--records", records, "judge records JSONL")->required();

    auto* lenratio_cmd = app.add_subcommand("lenratio", "accuracy by bad/good length ratio");
    lenratio_cmd->add_option("--records", records, "judge records JSONL")->required();
    lenratio_cmd->add_option("--edges", edges, "comma-separated bucket edges, 'inf' allowed");
    lenratio_cmd->add_option("--csv", csv, "write the table as CSV");
    lenratio_cmd->add_option("--json", json_out, "write the table as JSON");

    auto* lenhist_cmd = app.add_subcommand("lenhist", "histogram of good-bad length differences");
    lenhist_cmd->add_option("--data", input, "preference instances JSONL")->required();
    lenhist_cmd->add_option("--bin-width", bin_width)->check(CLI::PositiveNumber);
    lenhist_cmd->add_option("--csv", csv, "write the histogram as CSV");
    lenhist_cmd->add_option("--json", json_out, "write the histogram as JSON");

    auto* offtopic_cmd =
        app.add_subcommand("synthesize-offtopic", "bad responses from similar instructions");
    offtopic_cmd->add_option("--input", input, "instructions JSONL {id, instruction, reference_good?}")
        ->required();
    offtopic_cmd->add_option("--weak", weak, "weak generator provider config");
    offtopic_cmd->add_option("--strong", strong, "strong generator provider config");
    offtopic_cmd->add_option("--judge", judge, "distinctness judge provider config");
    offtopic_cmd->add_option("--seed", seed, "recorded in the manifest")
        ->each([&](const std::string&) { seed_set = true; });
    offtopic_cmd->add_option("--source-dataset", source_dataset, "label for kept instances");
    offtopic_cmd->add_option("--parallelism", parallelism)->check(CLI::PositiveNumber);
    offtopic_cmd->add_option("--out", out, "kept instances JSONL")->required();
    offtopic_cmd->add_option("--audit", audit, "all synthesis records JSONL");

    auto* erroneous_cmd =
        app.add_subcommand("synthesize-erroneous", "bad responses with sampled fallacies");
    erroneous_cmd->add_option("--input", input, "instructions JSONL with reference_good")
        ->required();
    erroneous_cmd->add_option("--gen", gen, "generator provider config");
    erroneous_cmd->add_option("--judge", judge, "correctness judge provider config");
    erroneous_cmd->add_option("--seed", seed, "fallacy sampling seed")
        ->each([&](const std::string&) { seed_set = true; });
    erroneous_cmd->add_option("--source-dataset", source_dataset, "label for kept instances");
    erroneous_cmd->add_option("--parallelism", parallelism)->check(CLI::PositiveNumber);
    erroneous_cmd->add_option("--out", out, "kept instances JSONL")->required();
    erroneous_cmd->add_option("--audit", audit, "all synthesis records JSONL");

    auto* filter_cmd =
        app.add_subcommand("filter-difficulty", "drop instances both reference judges get right");
    filter_cmd->add_option("--input", input, "preference instances JSONL")->required();
    filter_cmd->add_option("--judge1", judge1, "first reference judge provider config");
    filter_cmd->add_option("--judge2", judge2, "second reference judge provider config");
    filter_cmd->add_option("--mode", mode, "single_order|both_orders");
    filter_cmd->add_option("--template", template_id, "judging template id");
    filter_cmd->add_option("--parallelism", parallelism)->check(CLI::PositiveNumber);
    filter_cmd->add_option("--out-kept", out, "kept instances JSONL")->required();
    filter_cmd->add_option("--out-discarded", records, "discarded instances JSONL");
    filter_cmd->add_option("--stats", stats, "filter stats JSON");

    auto* merge_cmd = app.add_subcommand("merge", "spherical interpolation of two checkpoints");
    merge_cmd->add_option("--a", merge_a, "checkpoint A (directory or .json)")->required();
    merge_cmd->add_option("--b", merge_b, "checkpoint B")->required();
    merge_cmd->add_option("--t", t, "merge ratio in [0,1]")
        ->check(CLI::Range(0.0, 1.0));
    merge_cmd->add_option("--threshold", threshold, "parallel fallback threshold on |cos|");
    merge_cmd->add_option("--out", out, "output checkpoint path")->required();

    auto* report_cmd = app.add_subcommand("report", "metrics from stored judge records");
    report_cmd->add_option("--records", records, "judge records JSONL");
    report_cmd->add_option("--json", json_out, "write the report as JSON");
    report_cmd->add_option("--macro", macro,
                           "four adversarial subset percentages: neighbor,gptinst,gptout,manual");

    for (auto* cmd : {validate_cmd, evaluate_cmd, agreement_cmd, lenratio_cmd, lenhist_cmd,
                      offtopic_cmd, erroneous_cmd, filter_cmd, merge_cmd, report_cmd})
        cmd->add_option("--manifest", manifest_path, "manifest JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) cfg = load_run_config(config_path);
        if (cfg.parallelism && parallelism == 1) parallelism = *cfg.parallelism;
        if (!seed_set && cfg.seed) {
            seed = *cfg.seed;
            seed_set = true;
        }

        ManifestWriter manifest;
        CLI::App* sub = app.get_subcommands().front();
        manifest.command = sub->get_name();
        for (const auto* opt : sub->get_options()) {
            if (opt->count() > 0 && opt->get_name() != "--manifest")
                manifest.options[opt->get_name()] = opt->results().front();
        }
        if (seed_set) manifest.options["seed"] = seed;

        int code = kExitOk;
        if (sub == validate_cmd) {
            code = run_validate(bench);
        } else if (sub == evaluate_cmd) {
            code = run_evaluate(cfg, bench, judge, template_id, swap, parallelism, strict, force,
                                out, report_json_path, manifest);
        } else if (sub == agreement_cmd) {
            code = run_agreement(records);
        } else if (sub == lenratio_cmd) {
            code = run_lenratio(records, edges, csv, json_out, manifest);
        } else if (sub == lenhist_cmd) {
            code = run_lenhist(input, bin_width, csv, json_out, manifest);
        } else if (sub == offtopic_cmd) {
            if (!seed_set) throw ConfigError("synthesize commands require --seed (or config seed)");
            code = run_synth_offtopic(cfg, input, weak, strong, judge, source_dataset,
                                      parallelism, out, audit, manifest);
        } else if (sub == erroneous_cmd) {
            if (!seed_set) throw ConfigError("synthesize commands require --seed (or config seed)");
            code = run_synth_erroneous(cfg, input, gen, judge, seed, source_dataset, parallelism,
                                       out, audit, manifest);
        } else if (sub == filter_cmd) {
            code = run_filter(cfg, input, judge1, judge2, mode, template_id, parallelism, out,
                              records, stats, manifest);
        } else if (sub == merge_cmd) {
            code = run_merge(merge_a, merge_b, t, threshold, out, manifest);
        } else if (sub == report_cmd) {
            code = run_report(records, json_out, macro, manifest);
        }

        if (code == kExitOk) manifest.write(manifest_path);
        return code;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ProviderError& e) {
        std::cerr << "provider error: " << e.what() << "\n";
        return kExitProvider;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}
