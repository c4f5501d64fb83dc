#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "judgelab/datamodel.hpp"
#include "judgelab/judging.hpp"

namespace judgelab::metrics {

struct CategoryStat {
    std::size_t correct = 0;
    std::size_t total = 0;
    double accuracy = 0.0;
};

struct MetricReport {
    double overall_accuracy = 0.0;
    std::map<std::string, CategoryStat> per_category;
    std::optional<double> macro_average;      // LLMBar-style, when subset accuracies are supplied
    double micro_average = 0.0;               // total correct over total count
    std::optional<double> positional_agreement;  // when records pair up across swaps
};

/// correct/total. Throws DataError on empty input.
double accuracy(const std::vector<judging::JudgeRecord>& records);

/// Unweighted mean of the four adversarial subset accuracies. The map must
/// contain "neighbor", "gptinst", "gptout" and "manual"; other keys (e.g. a
/// natural subset) are ignored.
double llmbar_macro_average(const std::map<std::string, double>& subset_accuracy);

/// Total-correct over total-count accumulated per category ("" for
/// uncategorized records). Equals accuracy() over the same records.
double micro_average(const std::vector<judging::JudgeRecord>& records);

/// Fraction of instances whose two verdicts pick the same underlying
/// response, i.e. flip a<->b across the swap. Requires exactly one
/// swapped=false and one swapped=true record per instance_id; an
/// Unparseable member counts as disagreement.
double positional_agreement(const std::vector<judging::JudgeRecord>& records);

struct RatioBucket {
    double lo = 0.0;
    double hi = 0.0;  // half-open [lo, hi)
    std::size_t count = 0;
    std::size_t correct = 0;
    std::optional<double> accuracy;  // absent for empty buckets
};

struct RatioBucketTable {
    std::vector<RatioBucket> buckets;
    std::size_t out_of_range = 0;  // records whose ratio falls outside all buckets
};

/// (0, 0.5, 1.0, 1.5, 2.0, 3.0, +inf)
const std::vector<double>& default_ratio_edges();

/// Assign each record to the half-open bucket containing bad_len/good_len
/// and report per-bucket accuracy. Edges must be strictly ascending; the
/// final edge may be +inf. Nonpositive lengths raise DataError.
RatioBucketTable length_ratio_buckets(const std::vector<judging::JudgeRecord>& records,
                                      const std::vector<double>& edges = default_ratio_edges());

struct HistogramBin {
    long long lo = 0;
    long long hi = 0;  // half-open [lo, hi)
    std::size_t count = 0;
};

/// Histogram of len(good) - len(bad) in characters over half-open bins
/// [k*w, (k+1)*w); a negative bin means the bad (rejected) response is
/// longer. Bins are contiguous from the lowest to the highest populated one.
std::vector<HistogramBin> length_difference_histogram(
    const std::vector<data::PreferenceInstance>& instances, long long bin_width);

MetricReport compute_report(
    const std::vector<judging::JudgeRecord>& records,
    const std::optional<std::map<std::string, double>>& llmbar_subsets = std::nullopt);

nlohmann::json report_json(const MetricReport& report);
std::string report_text(const MetricReport& report);

std::string bucket_table_text(const RatioBucketTable& table);
std::string bucket_table_csv(const RatioBucketTable& table);
nlohmann::json bucket_table_json(const RatioBucketTable& table);

std::string histogram_text(const std::vector<HistogramBin>& bins);
std::string histogram_csv(const std::vector<HistogramBin>& bins);
nlohmann::json histogram_json(const std::vector<HistogramBin>& bins);

}  // namespace judgelab::metrics
