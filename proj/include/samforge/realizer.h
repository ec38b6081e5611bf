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

#ifndef SAMFORGE_REALIZER_H_
#define SAMFORGE_REALIZER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "samforge/grammar.h"
#include "samforge/match_world.h"
#include "samforge/types.h"

namespace samforge {

struct Token {
  CharRange range;
  Pos pos = Pos::kNoun;
  std::string lemma;
  std::optional<EventId> event;

  bool operator==(const Token&) const = default;
};

struct Sentence {
  CharRange range;
  std::optional<EventId> event;  // nullopt for connective sentences
  std::string template_id;

  bool operator==(const Sentence&) const = default;
};

struct SlotKey {
  EventId event;
  std::string slot;

  auto operator<=>(const SlotKey&) const = default;
};

// Slot names recorded per event sentence: "agent" (name or pronoun as
// written), "agent_name" (where the agent is named: its own sentence, or the
// antecedent sentence when pronominalized), "verb", "distance" ("25 yards"),
// "quantity" (the numeral alone), "minute", "team".
struct RealizedPassage {
  std::string text;
  std::vector<Sentence> sentences;
  std::vector<Token> tokens;  // word tokens only, ordered, non-overlapping
  std::map<SlotKey, CharRange> slot_spans;

  std::string_view Slice(CharRange r) const {
    return std::string_view(text).substr(r.begin, r.size());
  }
  std::optional<CharRange> Slot(EventId event, std::string_view slot) const;
  const Sentence* SentenceFor(EventId event) const;
  std::vector<std::string> TemplateIds() const;

  bool operator==(const RealizedPassage&) const = default;
};

struct RealizerOptions {
  double pronoun_probability = 0.2;
  bool connectives = false;
};

// One sentence per event in timestamp order, optionally preceded by a
// connective sentence. Only templates tagged with `partition` are used.
// Throws a generation error naming the first event kind without a template.
RealizedPassage RealizePassage(const MatchWorld& world, const Grammar& grammar,
                               Partition partition, uint64_t seed,
                               const RealizerOptions& options = {});

struct RealizedQuestion {
  std::string text;
  std::string template_id;
};

RealizedQuestion RealizeQuestion(const Question& question, const Grammar& grammar,
                                 Partition partition, uint64_t seed);

// Character range of the answer, taken from the source event's slot spans.
// Throws a consistency error when the slot is missing or does not spell the
// answer text.
CharRange LocateAnswer(const RealizedPassage& passage, const Answer& answer);

// Replaces `erase` with `insert` and shifts every later sentence, token and
// slot. Tokens and slots lying inside `erase` are dropped; `new_tokens` have
// ranges relative to erase.begin and are merged in order.
void SpliceText(RealizedPassage& passage, CharRange erase, std::string_view insert,
                std::vector<Token> new_tokens);

// Tokens for `text` placed at `offset`, tagged from the lexicon. Throws a
// configuration error for words the lexicon does not know.
std::vector<Token> TagWords(std::string_view text, size_t offset, const Lexicon& lexicon,
                            std::optional<EventId> event);

}  // namespace samforge

#endif  // SAMFORGE_REALIZER_H_
