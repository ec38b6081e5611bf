/*
 * Copyright 2026 The samforge Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SAMFORGE_FORMATS_H_
#define SAMFORGE_FORMATS_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "samforge/match_world.h"
#include "samforge/metrics.h"
#include "samforge/modifier.h"
#include "samforge/quality.h"

namespace samforge {

// Every file carries "offset_unit": "unicode-scalar" in its header; offsets
// in files count Unicode scalar values, offsets in memory count bytes.
inline constexpr std::string_view kOffsetUnit = "unicode-scalar";

size_t ByteToScalarOffset(std::string_view utf8, size_t byte_offset);
// Throws kParse when the scalar offset runs past the end of the text.
size_t ScalarToByteOffset(std::string_view utf8, size_t scalar_offset);

// aligned-jsonl: a header line, then one record per instance (baseline,
// intervention, spm) with pair_id, instance_id, variant, qtype,
// sam_categories, num_sam, question, passage, answers [{text,
// answer_start}], template_ids, partition and modifications.
// Throws kConsistency when an answer offset does not match the passage.
std::string WriteAlignedJsonl(std::span<const AlignedPair> pairs);

// Pairs come back with passage text only (no tokens, sentences or trace).
// Throws kParse with the line number on malformed input.
std::vector<AlignedPair> ReadAlignedJsonl(std::string_view text, std::string_view source = "input");

// SQuAD v1.1: one article per pair (title = pair_id), one paragraph per
// instance, qa id "{pair_id}-{variant}".
nlohmann::ordered_json SquadParagraph(const Instance& instance);
std::string WriteSquad(std::span<const AlignedPair> pairs);
std::vector<AlignedPair> ReadSquad(std::string_view text, std::string_view source = "input");

// Either format, detected from the first non-blank character ('{' followed
// by a newline-delimited header means jsonl).
std::vector<AlignedPair> ReadPairsFile(const std::string& path);

// Flat JSON object instance_id -> answer string.
PredictionSet ReadPredictions(std::string_view text, std::string_view source = "input");
std::string WritePredictions(const PredictionSet& preds);

nlohmann::ordered_json ScoreReportJson(const ScoreReport& report, const CorrectnessRule& rule);
nlohmann::ordered_json QualityReportJson(const QualityReport& report);

std::string WriteCorpus(const AnnotatedCorpus& corpus);
AnnotatedCorpus ReadCorpus(std::string_view text, std::string_view source = "input");

nlohmann::ordered_json WorldJson(const MatchWorld& world);

nlohmann::ordered_json ParseJson(std::string_view text, std::string_view source);
std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, std::string_view contents);
std::string Sha256Hex(std::string_view data);

}  // namespace samforge

#endif  // SAMFORGE_FORMATS_H_
