#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "judgelab/datamodel.hpp"
#include "judgelab/provider.hpp"

namespace judgelab::synthesis {

using data::FallacyType;

enum class RejectionReason { NotDistinct, UnintentionallyCorrect, ParseFailure };

std::string_view to_string(RejectionReason r);
RejectionReason parse_rejection_reason(std::string_view s);

/// Audit record of one synthesis attempt, kept or rejected.
struct SynthesisRecord {
    std::string id;
    std::string instruction;
    std::optional<std::string> similar_instruction;  // off-topic method only
    std::optional<std::string> explanation;          // erroneous method, when emitted
    std::string candidate_good;
    std::string candidate_bad;
    std::optional<FallacyType> fallacy;              // erroneous method only
    bool kept = false;
    std::optional<RejectionReason> rejection_reason;  // absent iff kept
    std::string detail;                               // error text for rejected stages
};

void to_json(nlohmann::json& j, const SynthesisRecord& r);
void from_json(const nlohmann::json& j, SynthesisRecord& r);

/// One line of the synthesis input file: {id, instruction, reference_good?}.
struct SynthesisInput {
    std::string id;
    std::string instruction;
    std::optional<std::string> reference_good;
};

void to_json(nlohmann::json& j, const SynthesisInput& s);
void from_json(const nlohmann::json& j, SynthesisInput& s);

/// First standalone YES/NO word in a completion, case-insensitive.
/// true = YES, false = NO, nullopt = neither found.
std::optional<bool> first_yes_no(std::string_view raw);

/// Split a completion on "## Name:" headers. Leading prose before the first
/// header is ignored; a duplicate header keeps the first occurrence and adds
/// a note to `warnings`. Missing required sections raise ParseError.
std::map<std::string, std::string> parse_sectioned_output(
    const std::string& raw, const std::vector<std::string>& required,
    std::vector<std::string>* warnings = nullptr);

/// Ask the generator for a similar-but-different instruction.
std::string generate_similar_instruction(provider::Provider& generator,
                                         const std::string& instruction);

/// Ask the judge whether two instructions differ. true = distinct (answer
/// was NO to "asking the same thing"). Unanswerable -> ParseError.
bool check_distinct(provider::Provider& judge, const std::string& instruction_a,
                    const std::string& instruction_b);

/// Ask the judge whether a response correctly follows the instruction.
/// true = incorrect, keep it (answer was NO). Unanswerable -> ParseError.
bool check_incorrect(provider::Provider& judge, const std::string& instruction,
                     const std::string& response);

/// Generate a bad response embedding the given fallacy. Returns
/// (explanation, response); a completion without "## Response:" raises
/// ParseError.
std::pair<std::optional<std::string>, std::string> erroneous_response(
    provider::Provider& generator, const std::string& instruction, FallacyType fallacy);

/// The prompt name used for a fallacy, e.g. "erroneous_wrong_fact".
std::string fallacy_prompt_name(FallacyType fallacy);

/// Seeded uniform sampler over the five fallacy types. A fixed seed yields
/// the same sequence on every platform.
class FallacySampler {
public:
    explicit FallacySampler(std::uint64_t seed) : rng_(seed) {}

    FallacyType next() {
        return data::all_fallacies()[static_cast<std::size_t>(rng_() % 5)];
    }

private:
    std::mt19937_64 rng_;
};

/// Off-topic pipeline for one instruction: derive a similar instruction with
/// the strong generator, reject when the distinctness judge says the two ask
/// the same thing, then pair the weak model's answer to the original (or the
/// provided reference) with the strong model's answer to the derived one.
/// Stage failures come back as rejected records, never exceptions.
SynthesisRecord offtopic_instance(provider::Provider& weak, provider::Provider& strong,
                                  provider::Provider& judge, const SynthesisInput& input);

/// Erroneous pipeline for one instruction: sample a fallacy, generate the
/// faulty response, and keep it only when the correctness judge confirms it
/// is wrong. Requires a reference good response.
SynthesisRecord erroneous_instance(provider::Provider& generator, provider::Provider& judge,
                                   const SynthesisInput& input, FallacySampler& sampler);

SynthesisRecord erroneous_instance(provider::Provider& generator, provider::Provider& judge,
                                   const SynthesisInput& input, FallacyType fallacy);

/// Labels stamped onto kept instances.
struct RunLabels {
    std::string source_dataset;
    std::string generator_good;
    std::string generator_bad;
};

/// Convert a kept record into a preference instance. Throws DataError for
/// rejected records.
data::PreferenceInstance to_preference_instance(const SynthesisRecord& record,
                                                data::Method method, const RunLabels& labels);

struct SynthesisRun {
    std::vector<data::PreferenceInstance> kept;
    std::vector<SynthesisRecord> audit;  // every attempt, in input order
};

SynthesisRun run_offtopic(provider::Provider& weak, provider::Provider& strong,
                          provider::Provider& judge, const std::vector<SynthesisInput>& inputs,
                          const RunLabels& labels, int parallelism = 1);

SynthesisRun run_erroneous(provider::Provider& generator, provider::Provider& judge,
                           const std::vector<SynthesisInput>& inputs, std::uint64_t seed,
                           const RunLabels& labels, int parallelism = 1);

}  // namespace judgelab::synthesis
