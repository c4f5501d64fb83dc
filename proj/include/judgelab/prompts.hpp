#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "judgelab/common.hpp"

namespace judgelab::prompts {

// Built-in prompt bodies, embedded verbatim and mirrored byte-for-byte by
// resources/prompts/<name>.txt. Placeholders use {name} syntax:
//
//   offtopic_similar_instruction   {instruction}
//   offtopic_distinct_check        {instruction_A} {instruction_B}
//   erroneous_wrong_fact           {instruction}
//   erroneous_incomplete           {instruction}
//   erroneous_irrelevant           {instruction}
//   erroneous_omit_necessary       {instruction}
//   erroneous_deviate              {instruction}
//   erroneous_correctness_check    {instruction} {response}
//   judge_general_single           {instruction} {output_1} {output_2}
//   judge_safety_single            {instruction} {output_1} {output_2}
//   judge_general_multi            {conversation} {output_1} {output_2}
//   judge_safety_multi             {conversation} {output_1} {output_2}

/// All built-in prompt names, in registry order.
const std::vector<std::string>& names();

/// Verbatim body for a built-in prompt. Throws ConfigError on unknown names.
std::string_view body(std::string_view name);

/// FNV-1a 64 hash of a built-in body.
std::uint64_t body_hash(std::string_view name);

/// name -> hex hash for every built-in prompt (run manifests embed this).
std::map<std::string, std::string> all_hashes();

/// Substitute {placeholder} tokens in a single pass; the substituted values
/// are never re-scanned. A {token} with no entry in `values` raises
/// DataError. Text in braces that is not a bare identifier is left alone.
std::string render(std::string_view body,
                   const std::map<std::string, std::string>& values);

/// Names of the {placeholders} appearing in a body, in order of appearance
/// (with repeats).
std::vector<std::string> placeholders(std::string_view body);

}  // namespace judgelab::prompts
