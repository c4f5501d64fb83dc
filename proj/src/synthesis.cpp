#include "judgelab/synthesis.hpp"

#include <atomic>
#include <cctype>
#include <thread>

#include "judgelab/prompts.hpp"

namespace judgelab::synthesis {

namespace {

using nlohmann::json;
using provider::CompletionRequest;
using provider::Provider;

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string complete_nonempty(Provider& p, const std::string& prompt) {
    std::string out = p.complete(CompletionRequest::user(prompt));
    if (trim(out).empty()) throw ProviderError("empty completion", 0, false);
    return out;
}

}  // namespace

std::string_view to_string(RejectionReason r) {
    switch (r) {
        case RejectionReason::NotDistinct: return "not_distinct";
        case RejectionReason::UnintentionallyCorrect: return "unintentionally_correct";
        case RejectionReason::ParseFailure: return "parse_failure";
    }
    return "?";
}

RejectionReason parse_rejection_reason(std::string_view s) {
    if (s == "not_distinct") return RejectionReason::NotDistinct;
    if (s == "unintentionally_correct") return RejectionReason::UnintentionallyCorrect;
    if (s == "parse_failure") return RejectionReason::ParseFailure;
    throw DataError("unknown rejection reason: '" + std::string(s) + "'");
}

void to_json(json& j, const SynthesisRecord& r) {
    j = json{{"id", r.id},
             {"instruction", r.instruction},
             {"candidate_good", r.candidate_good},
             {"candidate_bad", r.candidate_bad},
             {"kept", r.kept}};
    if (r.similar_instruction) j["similar_instruction"] = *r.similar_instruction;
    if (r.explanation) j["explanation"] = *r.explanation;
    if (r.fallacy) j["fallacy_type"] = data::to_string(*r.fallacy);
    if (r.rejection_reason) j["rejection_reason"] = to_string(*r.rejection_reason);
    if (!r.detail.empty()) j["detail"] = r.detail;
}

void from_json(const json& j, SynthesisRecord& r) {
    r = SynthesisRecord{};
    r.id = j.value("id", "");
    r.instruction = j.at("instruction").get<std::string>();
    if (j.contains("similar_instruction"))
        r.similar_instruction = j.at("similar_instruction").get<std::string>();
    if (j.contains("explanation")) r.explanation = j.at("explanation").get<std::string>();
    r.candidate_good = j.value("candidate_good", "");
    r.candidate_bad = j.value("candidate_bad", "");
    if (j.contains("fallacy_type"))
        r.fallacy = data::parse_fallacy(j.at("fallacy_type").get<std::string>());
    r.kept = j.value("kept", false);
    if (j.contains("rejection_reason"))
        r.rejection_reason = parse_rejection_reason(j.at("rejection_reason").get<std::string>());
    r.detail = j.value("detail", "");
}

void to_json(json& j, const SynthesisInput& s) {
    j = json{{"id", s.id}, {"instruction", s.instruction}};
    if (s.reference_good) j["reference_good"] = *s.reference_good;
}

void from_json(const json& j, SynthesisInput& s) {
    s = SynthesisInput{};
    s.id = j.value("id", "");
    s.instruction = j.at("instruction").get<std::string>();
    if (j.contains("reference_good") && !j.at("reference_good").is_null())
        s.reference_good = j.at("reference_good").get<std::string>();
}

std::optional<bool> first_yes_no(std::string_view raw) {
    std::size_t i = 0;
    while (i < raw.size()) {
        if (!std::isalpha(static_cast<unsigned char>(raw[i]))) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < raw.size() && std::isalpha(static_cast<unsigned char>(raw[j]))) ++j;
        std::string word(raw.substr(i, j - i));
        for (auto& c : word) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (word == "yes") return true;
        if (word == "no") return false;
        i = j;
    }
    return std::nullopt;
}

std::map<std::string, std::string> parse_sectioned_output(const std::string& raw,
                                                          const std::vector<std::string>& required,
                                                          std::vector<std::string>* warnings) {
    std::map<std::string, std::string> sections;
    std::string current_name;
    bool current_duplicate = false;
    std::string current_content;

    auto flush = [&] {
        if (current_name.empty()) return;
        if (current_duplicate) {
            if (warnings)
                warnings->push_back("duplicate section '## " + current_name +
                                    ":'; keeping the first occurrence");
        } else {
            sections[current_name] = trim(current_content);
        }
        current_name.clear();
        current_content.clear();
        current_duplicate = false;
    };

    std::size_t pos = 0;
    while (pos <= raw.size()) {
        const std::size_t eol = raw.find('\n', pos);
        const std::string_view line(raw.data() + pos,
                                    (eol == std::string::npos ? raw.size() : eol) - pos);
        if (line.rfind("## ", 0) == 0) {
            const std::size_t colon = line.find(':', 3);
            if (colon != std::string_view::npos) {
                flush();
                current_name = trim(line.substr(3, colon - 3));
                current_duplicate = sections.count(current_name) > 0;
                const std::string rest = trim(line.substr(colon + 1));
                if (!rest.empty()) {
                    current_content = rest;
                    current_content.push_back('\n');
                }
            } else if (!current_name.empty()) {
                current_content.append(line).push_back('\n');
            }
        } else if (!current_name.empty()) {
            current_content.append(line).push_back('\n');
        }
        // Text before the first header is ignored by construction.
        if (eol == std::string::npos) break;
        pos = eol + 1;
    }
    flush();

    for (const auto& name : required) {
        if (!sections.count(name))
            throw ParseError("completion is missing required section '## " + name + ":'");
    }
    return sections;
}

std::string generate_similar_instruction(Provider& generator, const std::string& instruction) {
    if (instruction.empty()) throw DataError("generate_similar_instruction: empty instruction");
    const std::string prompt = prompts::render(prompts::body("offtopic_similar_instruction"),
                                               {{"instruction", instruction}});
    return trim(complete_nonempty(generator, prompt));
}

bool check_distinct(Provider& judge, const std::string& instruction_a,
                    const std::string& instruction_b) {
    if (instruction_a.empty() || instruction_b.empty())
        throw DataError("check_distinct: empty instruction");
    const std::string prompt =
        prompts::render(prompts::body("offtopic_distinct_check"),
                        {{"instruction_A", instruction_a}, {"instruction_B", instruction_b}});
    const std::string answer = judge.complete(CompletionRequest::user(prompt));
    const auto yes = first_yes_no(answer);
    if (!yes)
        throw ParseError("distinctness check did not answer YES or NO: " + trim(answer));
    return !*yes;  // YES = asking the same thing = not distinct
}

bool check_incorrect(Provider& judge, const std::string& instruction,
                     const std::string& response) {
    const std::string prompt =
        prompts::render(prompts::body("erroneous_correctness_check"),
                        {{"instruction", instruction}, {"response", response}});
    const std::string answer = judge.complete(CompletionRequest::user(prompt));
    const auto yes = first_yes_no(answer);
    if (!yes)
        throw ParseError("correctness check did not answer YES or NO: " + trim(answer));
    return !*yes;  // NO = response does not follow the instruction = keep
}

std::string fallacy_prompt_name(FallacyType fallacy) {
    return "erroneous_" + std::string(data::to_string(fallacy));
}

std::pair<std::optional<std::string>, std::string> erroneous_response(Provider& generator,
                                                                      const std::string& instruction,
                                                                      FallacyType fallacy) {
    if (instruction.empty()) throw DataError("erroneous_response: empty instruction");
    const std::string prompt = prompts::render(prompts::body(fallacy_prompt_name(fallacy)),
                                               {{"instruction", instruction}});
    const std::string raw = complete_nonempty(generator, prompt);
    // The omit-necessary prompt also produces a "## List:" section; parsing
    // keeps only Explanation and Response.
    const auto sections = parse_sectioned_output(raw, {"Response"});
    std::optional<std::string> explanation;
    if (const auto it = sections.find("Explanation"); it != sections.end())
        explanation = it->second;
    return {explanation, sections.at("Response")};
}

SynthesisRecord offtopic_instance(Provider& weak, Provider& strong, Provider& judge,
                                  const SynthesisInput& input) {
    if (input.instruction.empty()) throw DataError("offtopic_instance: empty instruction");

    SynthesisRecord rec;
    rec.id = input.id;
    rec.instruction = input.instruction;
    try {
        const std::string similar = generate_similar_instruction(strong, input.instruction);
        rec.similar_instruction = similar;
        if (!check_distinct(judge, input.instruction, similar)) {
            rec.rejection_reason = RejectionReason::NotDistinct;
            return rec;
        }
        rec.candidate_good = input.reference_good
                                 ? *input.reference_good
                                 : complete_nonempty(weak, input.instruction);
        rec.candidate_bad = complete_nonempty(strong, similar);
        rec.kept = true;
    } catch (const ParseError& e) {
        rec.rejection_reason = RejectionReason::ParseFailure;
        rec.detail = e.what();
    } catch (const ProviderError& e) {
        rec.rejection_reason = RejectionReason::ParseFailure;
        rec.detail = e.what();
    }
    return rec;
}

SynthesisRecord erroneous_instance(Provider& generator, Provider& judge,
                                   const SynthesisInput& input, FallacyType fallacy) {
    if (input.instruction.empty()) throw DataError("erroneous_instance: empty instruction");
    if (!input.reference_good || input.reference_good->empty())
        throw DataError("erroneous_instance: reference_good is required (instruction '" +
                        input.id + "')");

    SynthesisRecord rec;
    rec.id = input.id;
    rec.instruction = input.instruction;
    rec.candidate_good = *input.reference_good;
    rec.fallacy = fallacy;
    try {
        auto [explanation, response] = erroneous_response(generator, input.instruction, fallacy);
        rec.explanation = std::move(explanation);
        rec.candidate_bad = std::move(response);
        if (!check_incorrect(judge, input.instruction, rec.candidate_bad)) {
            rec.rejection_reason = RejectionReason::UnintentionallyCorrect;
            return rec;
        }
        rec.kept = true;
    } catch (const ParseError& e) {
        rec.rejection_reason = RejectionReason::ParseFailure;
        rec.detail = e.what();
    } catch (const ProviderError& e) {
        rec.rejection_reason = RejectionReason::ParseFailure;
        rec.detail = e.what();
    }
    return rec;
}

SynthesisRecord erroneous_instance(Provider& generator, Provider& judge,
                                   const SynthesisInput& input, FallacySampler& sampler) {
    return erroneous_instance(generator, judge, input, sampler.next());
}

data::PreferenceInstance to_preference_instance(const SynthesisRecord& record,
                                                data::Method method, const RunLabels& labels) {
    if (!record.kept)
        throw DataError("to_preference_instance: record '" + record.id + "' was rejected");

    data::PreferenceInstance p;
    p.instruction = record.instruction;
    p.good_response = record.candidate_good;
    p.bad_response = record.candidate_bad;
    p.source_dataset = labels.source_dataset;
    p.method = method;
    if (method == data::Method::Erroneous) {
        if (!record.fallacy)
            throw DataError("to_preference_instance: erroneous record without fallacy");
        p.fallacy_type = record.fallacy;
    }
    p.generator_good = labels.generator_good;
    p.generator_bad = labels.generator_bad;
    p.id = record.id.empty()
               ? data::content_id(p.instruction, p.good_response, p.bad_response)
               : record.id;
    if (record.similar_instruction) p.extra["similar_instruction"] = *record.similar_instruction;
    if (record.explanation) p.extra["explanation"] = *record.explanation;
    data::check_invariants(p);
    return p;
}

namespace {

template <typename Fn>
std::vector<SynthesisRecord> map_inputs(const std::vector<SynthesisInput>& inputs,
                                        int parallelism, Fn&& one) {
    if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
    std::vector<SynthesisRecord> records(inputs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= inputs.size()) return;
            records[i] = one(i);
        }
    };
    const std::size_t n_workers =
        std::min<std::size_t>(static_cast<std::size_t>(parallelism), inputs.size());
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (std::size_t i = 0; i < n_workers; ++i) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    return records;
}

SynthesisRun assemble(std::vector<SynthesisRecord> records, data::Method method,
                      const RunLabels& labels) {
    SynthesisRun run;
    run.audit = std::move(records);
    for (const auto& rec : run.audit) {
        if (rec.kept) run.kept.push_back(to_preference_instance(rec, method, labels));
    }
    return run;
}

}  // namespace

SynthesisRun run_offtopic(Provider& weak, Provider& strong, Provider& judge,
                          const std::vector<SynthesisInput>& inputs, const RunLabels& labels,
                          int parallelism) {
    auto records = map_inputs(inputs, parallelism, [&](std::size_t i) {
        return offtopic_instance(weak, strong, judge, inputs[i]);
    });
    return assemble(std::move(records), data::Method::Offtopic, labels);
}

SynthesisRun run_erroneous(Provider& generator, Provider& judge,
                           const std::vector<SynthesisInput>& inputs, std::uint64_t seed,
                           const RunLabels& labels, int parallelism) {
    // Fallacies are drawn up front, in input order, so concurrency cannot
    // perturb the seeded sequence.
    FallacySampler sampler(seed);
    std::vector<FallacyType> fallacies;
    fallacies.reserve(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) fallacies.push_back(sampler.next());

    auto records = map_inputs(inputs, parallelism, [&](std::size_t i) {
        return erroneous_instance(generator, judge, inputs[i], fallacies[i]);
    });
    return assemble(std::move(records), data::Method::Erroneous, labels);
}

}  // namespace judgelab::synthesis
