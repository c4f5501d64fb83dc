#include "judgelab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace judgelab::metrics {

namespace {

using judging::JudgeRecord;
using judging::VerdictValue;
using nlohmann::json;

std::string fmt(const char* format, auto... args) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), format, args...);
    return std::string(buf);
}

std::string edge_str(double e) {
    if (std::isinf(e)) return e > 0 ? "inf" : "-inf";
    return fmt("%g", e);
}

}  // namespace

double accuracy(const std::vector<JudgeRecord>& records) {
    if (records.empty()) throw DataError("accuracy: no records");
    std::size_t correct = 0;
    for (const auto& r : records) correct += r.correct ? 1 : 0;
    return static_cast<double>(correct) / static_cast<double>(records.size());
}

double llmbar_macro_average(const std::map<std::string, double>& subset_accuracy) {
    static const char* kSubsets[] = {"neighbor", "gptinst", "gptout", "manual"};
    double sum = 0.0;
    for (const char* name : kSubsets) {
        const auto it = subset_accuracy.find(name);
        if (it == subset_accuracy.end())
            throw DataError(std::string("llmbar_macro_average: missing subset '") + name + "'");
        sum += it->second;
    }
    return sum / 4.0;
}

double micro_average(const std::vector<JudgeRecord>& records) {
    if (records.empty()) throw DataError("micro_average: no records");
    std::map<std::string, std::pair<std::size_t, std::size_t>> by_category;
    for (const auto& r : records) {
        const std::string key = r.category ? std::string(data::to_string(*r.category)) : "";
        auto& [correct, total] = by_category[key];
        correct += r.correct ? 1 : 0;
        total += 1;
    }
    std::size_t correct_sum = 0;
    std::size_t total_sum = 0;
    for (const auto& [_, stat] : by_category) {
        correct_sum += stat.first;
        total_sum += stat.second;
    }
    return static_cast<double>(correct_sum) / static_cast<double>(total_sum);
}

double positional_agreement(const std::vector<JudgeRecord>& records) {
    if (records.empty()) throw DataError("positional_agreement: no records");

    struct Pair {
        std::optional<VerdictValue> unswapped;
        std::optional<VerdictValue> swapped;
    };
    std::map<std::string, Pair> pairs;
    for (const auto& r : records) {
        auto& p = pairs[r.instance_id];
        auto& slot = r.swapped ? p.swapped : p.unswapped;
        if (slot)
            throw DataError("positional_agreement: duplicate record for instance '" +
                            r.instance_id + "' (swapped=" + (r.swapped ? "true" : "false") + ")");
        slot = r.verdict.value;
    }

    std::size_t agree = 0;
    for (const auto& [id, p] : pairs) {
        if (!p.unswapped || !p.swapped)
            throw DataError("positional_agreement: instance '" + id +
                            "' is missing one side of the swap pair");
        const bool flips = (*p.unswapped == VerdictValue::A && *p.swapped == VerdictValue::B) ||
                           (*p.unswapped == VerdictValue::B && *p.swapped == VerdictValue::A);
        agree += flips ? 1 : 0;
    }
    return static_cast<double>(agree) / static_cast<double>(pairs.size());
}

const std::vector<double>& default_ratio_edges() {
    static const std::vector<double> edges = {0.0, 0.5, 1.0, 1.5,
                                              2.0, 3.0, std::numeric_limits<double>::infinity()};
    return edges;
}

RatioBucketTable length_ratio_buckets(const std::vector<JudgeRecord>& records,
                                      const std::vector<double>& edges) {
    if (edges.size() < 2) throw ConfigError("length_ratio_buckets: need at least two edges");
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (!(edges[i - 1] < edges[i]))
            throw ConfigError("length_ratio_buckets: edges must be strictly ascending");

    RatioBucketTable table;
    table.buckets.resize(edges.size() - 1);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        table.buckets[i].lo = edges[i];
        table.buckets[i].hi = edges[i + 1];
    }

    for (const auto& r : records) {
        if (r.good_len == 0 || r.bad_len == 0)
            throw DataError("length_ratio_buckets: nonpositive length for instance '" +
                            r.instance_id + "'");
        const double ratio = static_cast<double>(r.bad_len) / static_cast<double>(r.good_len);
        const auto it = std::upper_bound(edges.begin(), edges.end(), ratio);
        if (it == edges.begin() || it == edges.end()) {
            ++table.out_of_range;
            continue;
        }
        auto& bucket = table.buckets[static_cast<std::size_t>(it - edges.begin()) - 1];
        ++bucket.count;
        bucket.correct += r.correct ? 1 : 0;
    }
    for (auto& b : table.buckets) {
        if (b.count > 0)
            b.accuracy = static_cast<double>(b.correct) / static_cast<double>(b.count);
    }
    return table;
}

std::vector<HistogramBin> length_difference_histogram(
    const std::vector<data::PreferenceInstance>& instances, long long bin_width) {
    if (bin_width <= 0) throw ConfigError("length_difference_histogram: bin_width must be > 0");
    if (instances.empty()) return {};

    auto floor_div = [](long long x, long long w) {
        return x >= 0 ? x / w : -((-x + w - 1) / w);
    };

    std::map<long long, std::size_t> by_bin;
    for (const auto& p : instances) {
        const long long diff = static_cast<long long>(p.good_response.size()) -
                               static_cast<long long>(p.bad_response.size());
        ++by_bin[floor_div(diff, bin_width)];
    }

    std::vector<HistogramBin> bins;
    const long long k_min = by_bin.begin()->first;
    const long long k_max = by_bin.rbegin()->first;
    for (long long k = k_min; k <= k_max; ++k) {
        HistogramBin bin;
        bin.lo = k * bin_width;
        bin.hi = (k + 1) * bin_width;
        const auto it = by_bin.find(k);
        bin.count = it == by_bin.end() ? 0 : it->second;
        bins.push_back(bin);
    }
    return bins;
}

MetricReport compute_report(const std::vector<JudgeRecord>& records,
                            const std::optional<std::map<std::string, double>>& llmbar_subsets) {
    MetricReport report;
    report.overall_accuracy = accuracy(records);
    report.micro_average = micro_average(records);
    for (const auto& r : records) {
        if (!r.category) continue;
        auto& stat = report.per_category[std::string(data::to_string(*r.category))];
        stat.correct += r.correct ? 1 : 0;
        stat.total += 1;
    }
    for (auto& [_, stat] : report.per_category)
        stat.accuracy = static_cast<double>(stat.correct) / static_cast<double>(stat.total);
    if (llmbar_subsets) report.macro_average = llmbar_macro_average(*llmbar_subsets);
    try {
        report.positional_agreement = positional_agreement(records);
    } catch (const DataError&) {
        report.positional_agreement = std::nullopt;  // records are not swap-paired
    }
    return report;
}

json report_json(const MetricReport& report) {
    json j;
    j["overall_accuracy"] = report.overall_accuracy;
    j["overall_percent"] = round_percent1(report.overall_accuracy);
    j["micro_average"] = report.micro_average;
    j["micro_percent"] = round_percent1(report.micro_average);
    json cats = json::object();
    for (const auto& [name, stat] : report.per_category) {
        cats[name] = json{{"correct", stat.correct},
                          {"total", stat.total},
                          {"accuracy", stat.accuracy},
                          {"percent", round_percent1(stat.accuracy)}};
    }
    j["per_category"] = cats;
    if (report.macro_average) {
        j["macro_average"] = *report.macro_average;
        j["macro_percent"] = round_percent1(*report.macro_average);
    }
    if (report.positional_agreement) {
        j["positional_agreement"] = *report.positional_agreement;
        j["positional_agreement_percent"] = round_percent1(*report.positional_agreement);
    }
    return j;
}

std::string report_text(const MetricReport& report) {
    std::ostringstream os;
    os << fmt("%-24s %8s %8s %9s\n", "category", "correct", "total", "accuracy");
    for (const auto& [name, stat] : report.per_category) {
        os << fmt("%-24s %8zu %8zu %8s%%\n", name.c_str(), stat.correct, stat.total,
                  format_percent1(stat.accuracy).c_str());
    }
    os << fmt("%-24s %26s%%\n", "overall",
              format_percent1(report.overall_accuracy).c_str());
    os << fmt("%-24s %26s%%\n", "micro_average", format_percent1(report.micro_average).c_str());
    if (report.macro_average)
        os << fmt("%-24s %26s%%\n", "macro_average",
                  format_percent1(*report.macro_average).c_str());
    if (report.positional_agreement)
        os << fmt("%-24s %26s%%\n", "positional_agreement",
                  format_percent1(*report.positional_agreement).c_str());
    return os.str();
}

std::string bucket_table_text(const RatioBucketTable& table) {
    std::ostringstream os;
    os << fmt("%-16s %8s %8s %9s\n", "bucket", "count", "correct", "accuracy");
    for (const auto& b : table.buckets) {
        const std::string range = "[" + edge_str(b.lo) + ", " + edge_str(b.hi) + ")";
        os << fmt("%-16s %8zu %8zu %9s\n", range.c_str(), b.count, b.correct,
                  b.accuracy ? (format_percent1(*b.accuracy) + "%").c_str() : "-");
    }
    if (table.out_of_range > 0)
        os << fmt("%-16s %8zu\n", "out_of_range", table.out_of_range);
    return os.str();
}

std::string bucket_table_csv(const RatioBucketTable& table) {
    std::ostringstream os;
    os << "lo,hi,count,correct,accuracy\n";
    for (const auto& b : table.buckets) {
        os << edge_str(b.lo) << ',' << edge_str(b.hi) << ',' << b.count << ',' << b.correct << ',';
        if (b.accuracy) os << fmt("%.6f", *b.accuracy);
        os << '\n';
    }
    return os.str();
}

json bucket_table_json(const RatioBucketTable& table) {
    json buckets = json::array();
    for (const auto& b : table.buckets) {
        json e = {{"lo", b.lo}, {"hi", b.hi}, {"count", b.count}, {"correct", b.correct}};
        if (b.accuracy) e["accuracy"] = *b.accuracy;
        buckets.push_back(e);
    }
    return json{{"buckets", buckets}, {"out_of_range", table.out_of_range}};
}

std::string histogram_text(const std::vector<HistogramBin>& bins) {
    std::ostringstream os;
    os << fmt("%-24s %8s\n", "bin", "count");
    for (const auto& b : bins) {
        const std::string range = "[" + std::to_string(b.lo) + ", " + std::to_string(b.hi) + ")";
        os << fmt("%-24s %8zu\n", range.c_str(), b.count);
    }
    return os.str();
}

std::string histogram_csv(const std::vector<HistogramBin>& bins) {
    std::ostringstream os;
    os << "lo,hi,count\n";
    for (const auto& b : bins) os << b.lo << ',' << b.hi << ',' << b.count << '\n';
    return os.str();
}

json histogram_json(const std::vector<HistogramBin>& bins) {
    json arr = json::array();
    for (const auto& b : bins)
        arr.push_back(json{{"lo", b.lo}, {"hi", b.hi}, {"count", b.count}});
    return json{{"bins", arr}};
}

}  // namespace judgelab::metrics
