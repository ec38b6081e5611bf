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

#ifndef SAMFORGE_MATCH_WORLD_H_
#define SAMFORGE_MATCH_WORLD_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "samforge/types.h"

namespace samforge {

enum class Pronoun { kHe, kShe };

struct Player {
  std::string name;
  int team = 0;  // index into MatchWorld::teams
  Pronoun pronoun = Pronoun::kHe;

  bool operator==(const Player&) const = default;
};

struct Quantity {
  int value = 0;
  std::string unit;  // "yards" or "metres"

  std::string Text() const { return std::to_string(value) + " " + unit; }
  bool operator==(const Quantity&) const = default;
};

struct Event {
  EventId id;
  EventKind kind = EventKind::kFieldGoal;
  int agent = 0;  // index into MatchWorld::players
  Quantity quantity;
  int minute = 1;
  bool polarity = true;
  std::vector<Modification> applied_modifications;

  bool operator==(const Event&) const = default;
};

struct MatchWorld {
  std::string match_id;
  std::array<std::string, 2> teams;
  std::vector<Player> players;
  std::vector<Event> events;  // ordered by minute

  const Event& event(EventId id) const;
  Event& event(EventId id);
  const Player& agent_of(const Event& e) const { return players.at(e.agent); }
  std::optional<int> FindPlayer(const std::string& name) const;

  bool operator==(const MatchWorld&) const = default;
};

struct WorldConfig {
  int min_events = 3;
  int max_events = 6;
  int min_distance = 15;
  int max_distance = 55;
  int min_minute = 1;
  int max_minute = 60;
  int players_per_team = 3;
  std::vector<std::string> units{"yards"};
  std::vector<EventKind> kinds{std::begin(kAllEventKinds), std::end(kAllEventKinds)};
  std::vector<std::string> team_names;    // empty: built-in vocabulary
  std::vector<std::string> player_names;  // empty: built-in vocabulary
};

// Throws a configuration error on empty vocabularies, inverted ranges, or
// ranges too small to give every event a distinct distance and minute.
void ValidateConfig(const WorldConfig& config);

// Throws a consistency error naming the first violated world invariant.
void ValidateWorld(const MatchWorld& world);

// Deterministic in (config, seed). Distances and minutes are pairwise
// distinct within a world, so no question over it can tie.
MatchWorld SimulateMatch(const WorldConfig& config, uint64_t seed);

const std::vector<std::string>& DefaultTeamNames();
const std::vector<std::string>& DefaultPlayerNames();

struct QuestionFocus {
  EventKind kind = EventKind::kFieldGoal;
  std::optional<std::string> player;  // distance-of-named-event
  std::optional<int> ordinal;         // agent-of-ordinal-event, 1-based

  bool operator==(const QuestionFocus&) const = default;
};

struct Question {
  QuestionType qtype = QuestionType::kArgmaxDistance;
  QuestionFocus focus;

  bool operator==(const Question&) const = default;
};

struct Answer {
  std::string text;
  // Player name for agent questions, distance for distance questions.
  std::variant<std::string, Quantity> value;
  EventId source_event;

  bool operator==(const Answer&) const = default;
};

// Ground-truth answer computed from successful events only; an event whose
// polarity a SAM has flipped is invisible here. Returns nullopt when no
// successful event satisfies the question. Throws a configuration error when
// the focus is malformed for the question type or names an unknown player.
std::optional<Answer> TryOracleAnswer(const MatchWorld& world, const Question& question);

// As TryOracleAnswer, but an unanswerable question throws kUnanswerable.
Answer OracleAnswer(const MatchWorld& world, const Question& question);

}  // namespace samforge

#endif  // SAMFORGE_MATCH_WORLD_H_
