#include "judgelab/difficulty.hpp"

#include <atomic>
#include <thread>

namespace judgelab::difficulty {

namespace {

using nlohmann::json;

}  // namespace

std::string_view to_string(FilterMode m) {
    return m == FilterMode::SingleOrder ? "single_order" : "both_orders";
}

FilterMode parse_filter_mode(std::string_view s) {
    if (s == "single_order") return FilterMode::SingleOrder;
    if (s == "both_orders") return FilterMode::BothOrders;
    throw ConfigError("mode must be 'single_order' or 'both_orders', got '" + std::string(s) + "'");
}

void to_json(json& j, const FilterOutcome& o) {
    j = json{{"instance_id", o.instance_id},
             {"judge1_correct", o.judge1_correct},
             {"judge2_correct", o.judge2_correct},
             {"discarded", o.discarded}};
}

void to_json(json& j, const FilterStats& s) {
    j = json{{"total", s.total},
             {"discarded", s.discarded},
             {"kept", s.total - s.discarded},
             {"discard_fraction", s.discard_fraction}};
}

bool judge_correct(provider::Provider& judge, const judging::PromptTemplate& tpl,
                   const data::PreferenceInstance& instance, FilterMode mode) {
    const data::EvalItem canonical = data::to_eval_item(instance);
    const judging::JudgeRecord first = judging::judge_item(judge, tpl, canonical);
    if (mode == FilterMode::SingleOrder) return first.correct;
    if (!first.correct) return false;
    return judging::judge_item(judge, tpl, data::swap_pair(canonical)).correct;
}

FilterResult difficulty_filter(provider::Provider& judge1, const judging::PromptTemplate& tpl1,
                               provider::Provider& judge2, const judging::PromptTemplate& tpl2,
                               const std::vector<data::PreferenceInstance>& instances,
                               FilterMode mode, int parallelism) {
    if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
    data::check_invariants(instances);

    std::vector<FilterOutcome> outcomes(instances.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= instances.size()) return;
            FilterOutcome& o = outcomes[i];
            o.instance_id = instances[i].id;
            o.judge1_correct = judge_correct(judge1, tpl1, instances[i], mode);
            o.judge2_correct = judge_correct(judge2, tpl2, instances[i], mode);
            o.discarded = o.judge1_correct && o.judge2_correct;
        }
    };
    const std::size_t n_workers =
        std::min<std::size_t>(static_cast<std::size_t>(parallelism), instances.size());
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (std::size_t i = 0; i < n_workers; ++i) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    FilterResult result;
    result.outcomes = std::move(outcomes);
    for (std::size_t i = 0; i < instances.size(); ++i) {
        if (result.outcomes[i].discarded) {
            result.discarded.push_back(instances[i]);
        } else {
            result.kept.push_back(instances[i]);
        }
    }
    result.stats = filter_stats(result.outcomes);
    return result;
}

FilterStats filter_stats(const std::vector<FilterOutcome>& outcomes) {
    if (outcomes.empty()) throw DataError("filter_stats: no outcomes");
    FilterStats stats;
    stats.total = outcomes.size();
    for (const auto& o : outcomes) stats.discarded += o.discarded ? 1 : 0;
    stats.discard_fraction =
        static_cast<double>(stats.discarded) / static_cast<double>(stats.total);
    return stats;
}

}  // namespace judgelab::difficulty
