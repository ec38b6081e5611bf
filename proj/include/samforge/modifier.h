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

#ifndef SAMFORGE_MODIFIER_H_
#define SAMFORGE_MODIFIER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "samforge/grammar.h"
#include "samforge/match_world.h"
#include "samforge/realizer.h"
#include "samforge/types.h"

namespace samforge {

struct SamResult {
  MatchWorld world;
  RealizedPassage passage;
  Modification modification;
};

// Negates `target`: its polarity becomes false and the realizing sentence
// gets the lexeme in front of the verb-phrase head. Lexemes that take the
// base form ("failed to", "did not") also rewrite the verb to its lemma.
// Throws kDoubleModification if the event was already modified and
// kConfiguration if the lexicon has no lexeme for the category.
SamResult ApplySam(const MatchWorld& world, const RealizedPassage& passage, EventId target,
                   SamCategory category, uint64_t seed, const Lexicon& lexicon);

SamResult ApplySamLexeme(const MatchWorld& world, const RealizedPassage& passage,
                         EventId target, const SamLexeme& lexeme, const Lexicon& lexicon);

struct SpmResult {
  RealizedPassage passage;
  Modification modification;
};

// Inserts an adverbial-modifier lexeme in front of the target's numeral
// ("from almost 25 metres"). The world is untouched, so the oracle answer is
// unchanged. Throws kNotApplicable when the sentence has no quantity and
// kConfiguration when the lexeme is not an adverbial modifier.
SpmResult ApplySpm(const RealizedPassage& passage, EventId target, const std::string& lexeme,
                   const Lexicon& lexicon);

struct AnswerSpan {
  std::string text;
  size_t start = 0;  // byte offset into the passage text

  bool operator==(const AnswerSpan&) const = default;
};

struct InstanceMeta {
  Variant variant = Variant::kBaseline;
  QuestionType qtype = QuestionType::kArgmaxDistance;
  Partition partition = Partition::kChallenge;
  std::vector<SamCategory> sam_categories;  // one per SAM, in application order
  int num_sam = 0;
  std::vector<Modification> modifications;  // SAMs for intervention, the SPM for spm
  std::vector<std::string> template_ids;    // question template first

  bool operator==(const InstanceMeta&) const = default;
};

struct Instance {
  std::string instance_id;
  std::string question_text;
  RealizedPassage passage;
  std::vector<AnswerSpan> answers;
  InstanceMeta meta;

  bool operator==(const Instance&) const = default;
};

// Ground truth kept alongside generated pairs. Absent for pairs read back
// from a file.
struct PairTrace {
  Question question;
  MatchWorld baseline_world;
  MatchWorld intervention_world;
  std::vector<EventId> sam_targets;  // answer-critical target first
  uint64_t seed = 0;
  int attempts = 0;

  bool operator==(const PairTrace&) const = default;
};

struct AlignedPair {
  std::string pair_id;
  Instance baseline;
  Instance intervention;
  std::optional<Instance> spm;
  std::optional<PairTrace> trace;

  bool operator==(const AlignedPair&) const = default;
};

std::string InstanceId(const std::string& pair_id, Variant variant);

struct PairConfig {
  WorldConfig world;
  RealizerOptions realizer;
  bool spm_enabled = true;
  int max_attempts = 100;
};

// Builds one aligned pair. Every attempt derives its own seed from `seed`;
// worlds where the question is unanswerable or where the intervention
// answer equals the baseline answer are rejected. Throws kConfiguration for
// num_sam < 1, num_sam >= max_events, or empty categories, and
// kGenerationExhausted after config.max_attempts rejections.
AlignedPair BuildAlignedPair(const PairConfig& config, QuestionType qtype, int num_sam,
                             const std::vector<SamCategory>& categories, Partition partition,
                             uint64_t seed, const Grammar& grammar,
                             const std::string& pair_id = "p000000");

// Insertion-only check on whitespace tokens: `modified` must contain every
// token of `original` in order. Returns the inserted tokens' indices in
// `modified`, or nullopt if some original token had to be deleted.
std::optional<std::vector<size_t>> InsertedTokens(std::string_view original,
                                                  std::string_view modified);

// Throws kConsistency naming the first violated AlignedPair invariant:
// shared question, A != A', answer offsets, SPM label, and diff confinement
// (insertions, plus verb substitutions for base-form lexemes, limited to
// sentences of SAM targets).
void ValidatePair(const AlignedPair& pair);

}  // namespace samforge

#endif  // SAMFORGE_MODIFIER_H_
