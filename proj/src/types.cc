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

#include "samforge/types.h"

#include <array>
#include <string>
#include <utility>

#include "samforge/errors.h"

namespace samforge {
namespace {

template <typename E, size_t N>
E Lookup(const std::array<std::pair<E, std::string_view>, N>& table,
         std::string_view name, const char* what) {
  for (const auto& [value, text] : table) {
    if (text == name) return value;
  }
  throw Error(ErrorKind::kConfiguration,
              std::string("unknown ") + what + " '" + std::string(name) + "'");
}

template <typename E, size_t N>
std::string_view Find(const std::array<std::pair<E, std::string_view>, N>& table,
                      E value) {
  for (const auto& [v, text] : table) {
    if (v == value) return text;
  }
  return "?";
}

constexpr std::array<std::pair<EventKind, std::string_view>, 4> kKinds{{
    {EventKind::kFieldGoal, "field-goal"},
    {EventKind::kTouchdownRun, "touchdown-run"},
    {EventKind::kTouchdownPass, "touchdown-pass"},
    {EventKind::kInterception, "interception"},
}};

constexpr std::array<std::pair<QuestionType, std::string_view>, 6> kQtypes{{
    {QuestionType::kArgmaxDistance, "argmax-distance"},
    {QuestionType::kArgminDistance, "argmin-distance"},
    {QuestionType::kFirstScorer, "first-scorer"},
    {QuestionType::kLastScorer, "last-scorer"},
    {QuestionType::kDistanceOfNamedEvent, "distance-of-named-event"},
    {QuestionType::kAgentOfOrdinalEvent, "agent-of-ordinal-event"},
}};

constexpr std::array<std::pair<SamCategory, std::string_view>, 4> kCategories{{
    {SamCategory::kAdverbialModifier, "adverbial-modifier"},
    {SamCategory::kExplicitNegation, "explicit-negation"},
    {SamCategory::kImplicitNegationVerb, "implicit-negation-verb"},
    {SamCategory::kModalIntent, "modal-intent"},
}};

constexpr std::array<std::pair<Partition, std::string_view>, 2> kPartitions{{
    {Partition::kAugmentation, "augmentation"},
    {Partition::kChallenge, "challenge"},
}};

constexpr std::array<std::pair<Variant, std::string_view>, 3> kVariants{{
    {Variant::kBaseline, "baseline"},
    {Variant::kIntervention, "intervention"},
    {Variant::kSpm, "spm"},
}};

constexpr std::array<std::pair<Pos, std::string_view>, 9> kPos{{
    {Pos::kVerb, "VERB"},
    {Pos::kNoun, "NOUN"},
    {Pos::kPronoun, "PRONOUN"},
    {Pos::kAdj, "ADJ"},
    {Pos::kAdv, "ADV"},
    {Pos::kNum, "NUM"},
    {Pos::kDet, "DET"},
    {Pos::kPrep, "PREP"},
    {Pos::kPropn, "PROPN"},
}};

}  // namespace

std::string_view Name(EventKind kind) { return Find(kKinds, kind); }
std::string_view Name(QuestionType qtype) { return Find(kQtypes, qtype); }
std::string_view Name(SamCategory category) { return Find(kCategories, category); }
std::string_view Name(Partition partition) { return Find(kPartitions, partition); }
std::string_view Name(Variant variant) { return Find(kVariants, variant); }
std::string_view Name(Pos pos) { return Find(kPos, pos); }

EventKind ParseEventKind(std::string_view name) {
  return Lookup(kKinds, name, "event kind");
}
QuestionType ParseQuestionType(std::string_view name) {
  return Lookup(kQtypes, name, "question type");
}
SamCategory ParseSamCategory(std::string_view name) {
  return Lookup(kCategories, name, "SAM category");
}
Partition ParsePartition(std::string_view name) {
  return Lookup(kPartitions, name, "partition");
}
Variant ParseVariant(std::string_view name) {
  return Lookup(kVariants, name, "variant");
}
Pos ParsePos(std::string_view name) { return Lookup(kPos, name, "POS tag"); }

bool HasDistance(EventKind kind) { return kind != EventKind::kInterception; }

}  // namespace samforge
