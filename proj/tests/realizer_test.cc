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

#include "samforge/realizer.h"

#include <gtest/gtest.h>

#include <set>

#include "samforge/errors.h"
#include "samforge/rng.h"
#include "test_util.h"

namespace samforge {
namespace {

using testing::GoalFromGrammar;
using testing::MakeWorld;

TEST(RealizePassage, GoalFromSentenceWithDistanceSlot) {
  const Grammar g = GoalFromGrammar();
  const MatchWorld w = MakeWorld({{"Smith", EventKind::kFieldGoal, 25, 10}}, "metres");
  const RealizedPassage p = RealizePassage(w, g, Partition::kChallenge, 1);
  EXPECT_EQ(p.text, "Smith scored a goal from 25 metres away.");
  ASSERT_TRUE(p.Slot(EventId{0}, "distance"));
  EXPECT_EQ(p.Slice(*p.Slot(EventId{0}, "distance")), "25 metres");
  EXPECT_EQ(p.Slice(*p.Slot(EventId{0}, "quantity")), "25");
  EXPECT_EQ(p.Slice(*p.Slot(EventId{0}, "verb")), "scored");
}

TEST(RealizePassage, PronounForRepeatedAgent) {
  const Grammar g = GoalFromGrammar();
  const MatchWorld w = MakeWorld(
      {{"Smith", EventKind::kFieldGoal, 31, 10}, {"Smith", EventKind::kFieldGoal, 25, 20}}, "metres");
  RealizerOptions options;
  options.pronoun_probability = 1.0;
  const RealizedPassage p = RealizePassage(w, g, Partition::kChallenge, 1, options);
  EXPECT_EQ(p.text, "Smith scored a goal from 31 metres away. She scored a goal from 25 metres away.");
  EXPECT_EQ(p.Slice(*p.Slot(EventId{1}, "agent")), "She");
  EXPECT_EQ(p.Slice(*p.Slot(EventId{1}, "agent_name")), "Smith");
  size_t pronouns = 0;
  for (const auto& t : p.tokens) pronouns += t.pos == Pos::kPronoun;
  EXPECT_EQ(pronouns, 1u);

  options.pronoun_probability = 0.0;
  EXPECT_EQ(RealizePassage(w, g, Partition::kChallenge, 1, options).text.find("She"), std::string::npos);
}

TEST(RealizePassage, Deterministic) {
  const MatchWorld w = SimulateMatch(WorldConfig{}, 3);
  const auto a = RealizePassage(w, DefaultGrammar(), Partition::kChallenge, 17);
  const auto b = RealizePassage(w, DefaultGrammar(), Partition::kChallenge, 17);
  EXPECT_EQ(a, b);
}

TEST(RealizePassage, InvariantsOverThousandWorlds) {
  const Grammar& g = DefaultGrammar();
  std::set<std::string> challenge_ids;
  std::set<std::string> augmentation_ids;
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    const MatchWorld w = SimulateMatch(WorldConfig{}, seed);
    const Partition part = seed % 2 ? Partition::kChallenge : Partition::kAugmentation;
    RealizerOptions options;
    options.connectives = seed % 5 == 0;
    const RealizedPassage p = RealizePassage(w, g, part, DeriveSeed(seed, 2), options);

    for (const auto& id : p.TemplateIds()) {
      ASSERT_EQ(g.ById(id).partition, part) << id;
      (part == Partition::kChallenge ? challenge_ids : augmentation_ids).insert(id);
    }
    // Span faithfulness.
    for (const auto& [key, range] : p.slot_spans) {
      const Event& e = w.event(key.event);
      const std::string_view s = p.Slice(range);
      if (key.slot == "agent_name") ASSERT_EQ(s, w.agent_of(e).name);
      if (key.slot == "distance") ASSERT_EQ(s, e.quantity.Text());
      if (key.slot == "quantity") ASSERT_EQ(s, std::to_string(e.quantity.value));
      if (key.slot == "minute") ASSERT_EQ(s, std::to_string(e.minute));
      if (key.slot == "verb") {
        const LexEntry* verb = g.lexicon().Lookup(s);
        ASSERT_NE(verb, nullptr);
        ASSERT_TRUE(verb->semantic_class.starts_with("success:")) << s;
      }
    }
    // Every token is tagged and lies on a word boundary.
    for (const auto& t : p.tokens) {
      ASSERT_LE(t.range.end, p.text.size());
      ASSERT_FALSE(t.lemma.empty());
    }
    for (const auto& e : w.events) {
      ASSERT_NE(p.SentenceFor(e.id), nullptr);
      ASSERT_EQ(p.Slot(e.id, "distance").has_value(), HasDistance(e.kind));
    }
    // Every oracle answer is found at its slot.
    for (QuestionType q : kAllQuestionTypes) {
      for (EventKind kind : kAllEventKinds) {
        Question question{q, {kind, std::nullopt, q == QuestionType::kAgentOfOrdinalEvent ? std::optional(2) : std::nullopt}};
        if (q == QuestionType::kDistanceOfNamedEvent) question.focus.player = w.players.front().name;
        const bool needs_distance = q == QuestionType::kArgmaxDistance || q == QuestionType::kArgminDistance ||
                                    q == QuestionType::kDistanceOfNamedEvent;
        if (needs_distance && !HasDistance(kind)) continue;
        const auto answer = TryOracleAnswer(w, question);
        if (!answer) continue;
        const CharRange r = LocateAnswer(p, *answer);
        ASSERT_EQ(p.text.substr(r.begin, r.size()), answer->text);
      }
    }
  }
  for (const auto& id : challenge_ids) EXPECT_FALSE(augmentation_ids.contains(id)) << id;
}

TEST(LocateAnswer, PrefersSlotOverTimestampCollision) {
  const MatchWorld w = MakeWorld({{"Smith", EventKind::kFieldGoal, 25, 40}, {"Jones", EventKind::kFieldGoal, 40, 45}});
  const Grammar g = DefaultGrammar().Filtered([](const Template& t) { return t.id == "fg-c1"; });
  const RealizedPassage p = RealizePassage(w, g, Partition::kChallenge, 1);
  ASSERT_NE(p.text.find("40"), p.text.rfind("40")) << p.text;
  const Answer a = OracleAnswer(w, Question{QuestionType::kDistanceOfNamedEvent, {EventKind::kFieldGoal, "Jones", {}}});
  const CharRange r = LocateAnswer(p, a);
  EXPECT_EQ(r, *p.Slot(EventId{1}, "distance"));
  EXPECT_EQ(p.Slice(r), "40 yards");
  EXPECT_GT(r.begin, p.text.find("40"));
}

TEST(LocateAnswer, UniqueAgentMention) {
  const MatchWorld w = MakeWorld({{"Smith", EventKind::kFieldGoal, 25, 4}, {"Jones", EventKind::kFieldGoal, 40, 9}});
  const RealizedPassage p = RealizePassage(w, DefaultGrammar(), Partition::kChallenge, 5);
  const Answer a = OracleAnswer(w, Question{QuestionType::kArgmaxDistance, {EventKind::kFieldGoal, {}, {}}});
  const CharRange r = LocateAnswer(p, a);
  EXPECT_EQ(p.Slice(r), "Jones");
  EXPECT_EQ(r.begin, p.text.find("Jones"));
}

TEST(LocateAnswer, UnrealizedEventIsConsistencyError) {
  const MatchWorld w = MakeWorld({{"Smith", EventKind::kFieldGoal, 25, 4}, {"Jones", EventKind::kFieldGoal, 40, 9}});
  const RealizedPassage p = RealizePassage(w, DefaultGrammar(), Partition::kChallenge, 5);
  Answer ghost{"Ghost", std::string("Ghost"), EventId{7}};
  try {
    LocateAnswer(p, ghost);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConsistency);
  }
}

TEST(RealizeQuestion, ArgmaxFieldGoal) {
  const Question q{QuestionType::kArgmaxDistance, {EventKind::kFieldGoal, {}, {}}};
  std::set<std::string> texts;
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const auto rq = RealizeQuestion(q, DefaultGrammar(), Partition::kChallenge, seed);
    if (rq.template_id == "qmax-c1") texts.insert(rq.text);
  }
  EXPECT_EQ(texts, (std::set<std::string>{"Who kicked the longest field goal?"}));
}

TEST(RealizeQuestion, NamedEventMentionsPlayer) {
  const Question q{QuestionType::kDistanceOfNamedEvent, {EventKind::kFieldGoal, "Smith", {}}};
  for (Partition part : {Partition::kAugmentation, Partition::kChallenge}) {
    for (uint64_t seed = 0; seed < 20; ++seed) {
      EXPECT_NE(RealizeQuestion(q, DefaultGrammar(), part, seed).text.find("Smith"), std::string::npos);
    }
  }
}

TEST(RealizeQuestion, PartitionsShareNoTemplates) {
  Rng rng(1);
  std::set<std::string> ids[2];
  for (int i = 0; i < 1000; ++i) {
    const QuestionType qt = kAllQuestionTypes[rng.Uniform(0, 5)];
    Question q{qt, {EventKind::kTouchdownPass, "Smith", 2}};
    const int part = static_cast<int>(rng.Uniform(0, 1));
    ids[part].insert(RealizeQuestion(q, DefaultGrammar(), static_cast<Partition>(part), rng.Next()).template_id);
  }
  for (const auto& id : ids[0]) EXPECT_FALSE(ids[1].contains(id));
  EXPECT_GE(ids[0].size(), 6u);
}

TEST(SpliceText, ShiftsLaterSpans) {
  const Grammar g = GoalFromGrammar();
  const MatchWorld w = MakeWorld({{"Smith", EventKind::kFieldGoal, 31, 10}, {"Jones", EventKind::kFieldGoal, 25, 20}});
  RealizedPassage p = RealizePassage(w, g, Partition::kChallenge, 1);
  const CharRange verb = *p.Slot(EventId{0}, "verb");
  SpliceText(p, CharRange{verb.begin, verb.begin}, "nearly ", TagWords("nearly", 0, g.lexicon(), EventId{0}));
  EXPECT_EQ(p.text, "Smith nearly scored a goal from 31 yards away. Jones scored a goal from 25 yards away.");
  EXPECT_EQ(p.Slice(*p.Slot(EventId{0}, "verb")), "scored");
  EXPECT_EQ(p.Slice(*p.Slot(EventId{1}, "agent")), "Jones");
  EXPECT_EQ(p.Slice(*p.Slot(EventId{1}, "distance")), "25 yards");
  EXPECT_EQ(p.Slice(p.sentences[1].range), "Jones scored a goal from 25 yards away.");
  for (size_t i = 1; i < p.tokens.size(); ++i) EXPECT_LE(p.tokens[i - 1].range.end, p.tokens[i].range.begin);
}

}  // namespace
}  // namespace samforge
