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

#include "samforge/match_world.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "samforge/errors.h"
#include "samforge/rng.h"

namespace samforge {

const std::vector<std::string>& DefaultTeamNames() {
  static const std::vector<std::string> kNames{
      "Patriots", "Colts",   "Eagles",   "Giants",  "Jets",     "Bears",
      "Packers",  "Lions",   "Vikings",  "Cowboys", "Rams",     "Saints",
      "Falcons",  "Panthers", "Chiefs",  "Raiders", "Broncos",  "Chargers",
      "Steelers", "Ravens",  "Browns",   "Bengals", "Texans",   "Titans",
      "Jaguars",  "Dolphins", "Bills",   "Seahawks", "Cardinals", "Buccaneers"};
  return kNames;
}

const std::vector<std::string>& DefaultPlayerNames() {
  static const std::vector<std::string> kNames{
      "Smith",    "Jones",    "Brown",   "Miller",   "Davis",    "Wilson",
      "Moore",    "Taylor",   "Anderson", "Thomas",  "Jackson",  "White",
      "Harris",   "Martin",   "Thompson", "Garcia",  "Martinez", "Robinson",
      "Clark",    "Lewis",    "Lee",     "Walker",   "Hall",     "Allen",
      "Young",    "King",     "Wright",  "Scott",    "Green",    "Baker",
      "Adams",    "Nelson",   "Hill",    "Campbell", "Mitchell", "Roberts",
      "Carter",   "Phillips", "Evans",   "Turner",   "Parker",   "Collins",
      "Edwards",  "Stewart",  "Morris",  "Murphy",   "Cook",     "Rogers",
      "Morgan",   "Cooper",   "Peterson", "Reed",    "Bailey",   "Bell",
      "Howard",   "Ward",     "Cox",     "Richardson", "Wood",   "Watson"};
  return kNames;
}

const Event& MatchWorld::event(EventId id) const {
  for (const auto& e : events) {
    if (e.id == id) return e;
  }
  throw Error(ErrorKind::kConsistency,
              "event " + std::to_string(id.value) + " not in world " + match_id);
}

Event& MatchWorld::event(EventId id) {
  return const_cast<Event&>(static_cast<const MatchWorld&>(*this).event(id));
}

std::optional<int> MatchWorld::FindPlayer(const std::string& name) const {
  for (size_t i = 0; i < players.size(); ++i) {
    if (players[i].name == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

void ValidateConfig(const WorldConfig& config) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::kConfiguration, msg); };
  if (config.min_events < 2) fail("min_events must be at least 2");
  if (config.min_events > config.max_events) fail("min_events > max_events");
  if (config.min_distance < 1) fail("distances must be positive");
  if (config.min_distance > config.max_distance) fail("min_distance > max_distance");
  if (config.min_minute < 1 || config.max_minute > 60) fail("minutes must lie in [1, 60]");
  if (config.min_minute > config.max_minute) fail("min_minute > max_minute");
  if (config.max_distance - config.min_distance + 1 < config.max_events)
    fail("distance range too small for distinct distances");
  if (config.max_minute - config.min_minute + 1 < config.max_events)
    fail("minute range too small for distinct timestamps");
  if (config.players_per_team < 1) fail("players_per_team must be positive");
  if (config.units.empty()) fail("empty unit vocabulary");
  if (config.kinds.empty()) fail("empty event-kind set");
  const auto& teams = config.team_names.empty() ? DefaultTeamNames() : config.team_names;
  const auto& names = config.player_names.empty() ? DefaultPlayerNames() : config.player_names;
  if (std::set<std::string>(teams.begin(), teams.end()).size() < 2)
    fail("team vocabulary needs at least 2 distinct names");
  if (std::set<std::string>(names.begin(), names.end()).size() <
      static_cast<size_t>(2 * config.players_per_team))
    fail("player vocabulary smaller than two rosters");
}

void ValidateWorld(const MatchWorld& world) {
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorKind::kConsistency, "world " + world.match_id + ": " + msg);
  };
  if (world.teams[0] == world.teams[1]) fail("team names not distinct");
  std::set<std::string> names;
  for (const auto& p : world.players) {
    if (p.team != 0 && p.team != 1) fail("player " + p.name + " has no team");
    if (!names.insert(p.name).second) fail("duplicate player " + p.name);
  }
  if (world.events.size() < 2) fail("fewer than 2 events");
  std::set<int32_t> ids;
  for (size_t i = 0; i < world.events.size(); ++i) {
    const Event& e = world.events[i];
    if (!ids.insert(e.id.value).second) fail("duplicate event id");
    if (e.agent < 0 || e.agent >= static_cast<int>(world.players.size()))
      fail("event agent out of range");
    if (e.quantity.value <= 0) fail("non-positive quantity");
    if (e.minute < 1 || e.minute > 60) fail("minute outside [1, 60]");
    if (i > 0 && world.events[i - 1].minute >= e.minute) fail("timestamps not increasing");
    if (!e.polarity && e.applied_modifications.empty())
      fail("negated event without a modification");
  }
}

MatchWorld SimulateMatch(const WorldConfig& config, uint64_t seed) {
  ValidateConfig(config);
  Rng rng(seed);
  const auto& teams = config.team_names.empty() ? DefaultTeamNames() : config.team_names;
  const auto& names = config.player_names.empty() ? DefaultPlayerNames() : config.player_names;

  MatchWorld world;
  std::ostringstream id;
  id << "m" << std::hex << seed;
  world.match_id = id.str();

  std::vector<std::string> team_pool(teams.begin(), teams.end());
  std::sort(team_pool.begin(), team_pool.end());
  team_pool.erase(std::unique(team_pool.begin(), team_pool.end()), team_pool.end());
  rng.Shuffle(team_pool);
  world.teams = {team_pool[0], team_pool[1]};

  std::vector<std::string> name_pool(names.begin(), names.end());
  std::sort(name_pool.begin(), name_pool.end());
  name_pool.erase(std::unique(name_pool.begin(), name_pool.end()), name_pool.end());
  rng.Shuffle(name_pool);
  for (int i = 0; i < 2 * config.players_per_team; ++i) {
    world.players.push_back(Player{
        name_pool[static_cast<size_t>(i)], i / config.players_per_team,
        rng.Bernoulli(0.5) ? Pronoun::kShe : Pronoun::kHe});
  }

  const int n = static_cast<int>(rng.Uniform(config.min_events, config.max_events));
  auto minutes = rng.SampleDistinct(config.min_minute, config.max_minute, static_cast<size_t>(n));
  std::sort(minutes.begin(), minutes.end());
  const auto distances =
      rng.SampleDistinct(config.min_distance, config.max_distance, static_cast<size_t>(n));
  const std::string& unit = rng.Pick(config.units);

  for (int i = 0; i < n; ++i) {
    Event e;
    e.id = EventId{i};
    e.kind = rng.Pick(config.kinds);
    e.agent = static_cast<int>(rng.Uniform(0, static_cast<int64_t>(world.players.size()) - 1));
    e.quantity = Quantity{static_cast<int>(distances[static_cast<size_t>(i)]), unit};
    e.minute = static_cast<int>(minutes[static_cast<size_t>(i)]);
    world.events.push_back(std::move(e));
  }
  return world;
}

std::optional<Answer> TryOracleAnswer(const MatchWorld& world, const Question& question) {
  const QuestionFocus& focus = question.focus;
  const bool distance_question = question.qtype == QuestionType::kArgmaxDistance ||
                                 question.qtype == QuestionType::kArgminDistance ||
                                 question.qtype == QuestionType::kDistanceOfNamedEvent;
  if (distance_question && !HasDistance(focus.kind)) {
    throw Error(ErrorKind::kConfiguration,
                std::string(Name(question.qtype)) + " needs a kind with a distance");
  }

  std::optional<int> player;
  if (question.qtype == QuestionType::kDistanceOfNamedEvent) {
    if (!focus.player) throw Error(ErrorKind::kConfiguration, "named-event question without player");
    player = world.FindPlayer(*focus.player);
    if (!player) {
      throw Error(ErrorKind::kConfiguration,
                  "question names unknown player " + *focus.player);
    }
  }
  if (question.qtype == QuestionType::kAgentOfOrdinalEvent && (!focus.ordinal || *focus.ordinal < 1)) {
    throw Error(ErrorKind::kConfiguration, "ordinal question without a positive ordinal");
  }

  std::vector<const Event*> matches;
  for (const auto& e : world.events) {
    if (!e.polarity || e.kind != focus.kind) continue;
    if (player && e.agent != *player) continue;
    matches.push_back(&e);
  }
  if (matches.empty()) return std::nullopt;

  auto by_distance = [](const Event* a, const Event* b) {
    return a->quantity.value < b->quantity.value;
  };
  const Event* source = nullptr;
  switch (question.qtype) {
    case QuestionType::kArgmaxDistance:
      source = *std::max_element(matches.begin(), matches.end(), by_distance);
      break;
    case QuestionType::kArgminDistance:
      source = *std::min_element(matches.begin(), matches.end(), by_distance);
      break;
    case QuestionType::kFirstScorer:
    case QuestionType::kDistanceOfNamedEvent:
      source = matches.front();
      break;
    case QuestionType::kLastScorer:
      source = matches.back();
      break;
    case QuestionType::kAgentOfOrdinalEvent:
      if (static_cast<size_t>(*focus.ordinal) > matches.size()) return std::nullopt;
      source = matches[static_cast<size_t>(*focus.ordinal - 1)];
      break;
  }

  Answer answer;
  answer.source_event = source->id;
  if (question.qtype == QuestionType::kDistanceOfNamedEvent) {
    answer.text = source->quantity.Text();
    answer.value = source->quantity;
  } else {
    answer.text = world.agent_of(*source).name;
    answer.value = answer.text;
  }
  return answer;
}

Answer OracleAnswer(const MatchWorld& world, const Question& question) {
  auto answer = TryOracleAnswer(world, question);
  if (!answer) {
    throw Error(ErrorKind::kUnanswerable,
                std::string(Name(question.qtype)) + " over " +
                    std::string(Name(question.focus.kind)) + " in world " + world.match_id);
  }
  return *answer;
}

}  // namespace samforge
