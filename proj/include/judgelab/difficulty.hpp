#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "judgelab/datamodel.hpp"
#include "judgelab/judging.hpp"
#include "judgelab/provider.hpp"

namespace judgelab::difficulty {

/// How "correctly judged" is established per judge: one canonical ordering,
/// or robustly correct under both position orderings.
enum class FilterMode { SingleOrder, BothOrders };

std::string_view to_string(FilterMode m);
FilterMode parse_filter_mode(std::string_view s);

struct FilterOutcome {
    std::string instance_id;
    bool judge1_correct = false;
    bool judge2_correct = false;
    bool discarded = false;  // discarded <=> both judges correct
};

void to_json(nlohmann::json& j, const FilterOutcome& o);

struct FilterStats {
    std::size_t total = 0;
    std::size_t discarded = 0;
    double discard_fraction = 0.0;
};

void to_json(nlohmann::json& j, const FilterStats& s);

struct FilterResult {
    std::vector<data::PreferenceInstance> kept;
    std::vector<data::PreferenceInstance> discarded;
    std::vector<FilterOutcome> outcomes;  // input order
    FilterStats stats;
};

/// Whether one judge gets one instance right under the given mode. Provider
/// failures count as incorrect: an unanswerable item is not "too easy".
bool judge_correct(provider::Provider& judge, const judging::PromptTemplate& tpl,
                   const data::PreferenceInstance& instance, FilterMode mode);

/// Discard every instance both reference judges get right; keep the rest.
FilterResult difficulty_filter(provider::Provider& judge1, const judging::PromptTemplate& tpl1,
                               provider::Provider& judge2, const judging::PromptTemplate& tpl2,
                               const std::vector<data::PreferenceInstance>& instances,
                               FilterMode mode = FilterMode::BothOrders, int parallelism = 1);

/// Throws DataError on empty input.
FilterStats filter_stats(const std::vector<FilterOutcome>& outcomes);

}  // namespace judgelab::difficulty
