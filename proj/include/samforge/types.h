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

#ifndef SAMFORGE_TYPES_H_
#define SAMFORGE_TYPES_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace samforge {

enum class EventKind { kFieldGoal, kTouchdownRun, kTouchdownPass, kInterception };

enum class QuestionType {
  kArgmaxDistance,
  kArgminDistance,
  kFirstScorer,
  kLastScorer,
  kDistanceOfNamedEvent,
  kAgentOfOrdinalEvent,
};

enum class SamCategory {
  kAdverbialModifier,
  kExplicitNegation,
  kImplicitNegationVerb,
  kModalIntent,
};

enum class Attachment { kPreVerb, kPreNumeral };
enum class Semantics { kAltering, kPreserving };

enum class Partition { kAugmentation, kChallenge };

enum class Variant { kBaseline, kIntervention, kSpm };

enum class Pos { kVerb, kNoun, kPronoun, kAdj, kAdv, kNum, kDet, kPrep, kPropn };

inline constexpr EventKind kAllEventKinds[] = {
    EventKind::kFieldGoal, EventKind::kTouchdownRun, EventKind::kTouchdownPass,
    EventKind::kInterception};
inline constexpr QuestionType kAllQuestionTypes[] = {
    QuestionType::kArgmaxDistance,      QuestionType::kArgminDistance,
    QuestionType::kFirstScorer,         QuestionType::kLastScorer,
    QuestionType::kDistanceOfNamedEvent, QuestionType::kAgentOfOrdinalEvent};
inline constexpr SamCategory kAllSamCategories[] = {
    SamCategory::kAdverbialModifier, SamCategory::kExplicitNegation,
    SamCategory::kImplicitNegationVerb, SamCategory::kModalIntent};

// Stable external names ("field-goal", "argmax-distance", ...). The parsers
// throw a configuration error on unknown names.
std::string_view Name(EventKind kind);
std::string_view Name(QuestionType qtype);
std::string_view Name(SamCategory category);
std::string_view Name(Partition partition);
std::string_view Name(Variant variant);
std::string_view Name(Pos pos);

EventKind ParseEventKind(std::string_view name);
QuestionType ParseQuestionType(std::string_view name);
SamCategory ParseSamCategory(std::string_view name);
Partition ParsePartition(std::string_view name);
Variant ParseVariant(std::string_view name);
Pos ParsePos(std::string_view name);

// Events whose templates realize a distance; distance questions and SPM
// only apply to these.
bool HasDistance(EventKind kind);

struct EventId {
  int32_t value = -1;
  auto operator<=>(const EventId&) const = default;
};

// Half-open character range [begin, end) into a passage. Offsets are byte
// offsets internally; the file formats convert to Unicode scalar offsets.
struct CharRange {
  size_t begin = 0;
  size_t end = 0;

  size_t size() const { return end - begin; }
  bool operator==(const CharRange&) const = default;
};

// One SAM or SPM application.
struct Modification {
  SamCategory category = SamCategory::kAdverbialModifier;
  std::string lexeme;
  Attachment attachment = Attachment::kPreVerb;
  Semantics semantics = Semantics::kAltering;

  bool operator==(const Modification&) const = default;
};

}  // namespace samforge

#endif  // SAMFORGE_TYPES_H_
