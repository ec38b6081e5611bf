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

#include "samforge/modifier.h"

#include <algorithm>
#include <cctype>
#include <set>

#include "samforge/errors.h"
#include "samforge/rng.h"

namespace samforge {
namespace {

std::vector<std::string_view> WhitespaceTokens(std::string_view text) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.push_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

struct TokenDiff {
  std::vector<size_t> inserted;  // indices into the modified sequence
  std::vector<size_t> deleted;   // indices into the original sequence
};

// LCS alignment over whitespace tokens.
TokenDiff DiffTokens(std::string_view original, std::string_view modified) {
  const auto a = WhitespaceTokens(original);
  const auto b = WhitespaceTokens(modified);
  const size_t n = a.size(), m = b.size();
  std::vector<std::vector<uint32_t>> lcs(n + 1, std::vector<uint32_t>(m + 1, 0));
  for (size_t i = n; i-- > 0;) {
    for (size_t j = m; j-- > 0;) {
      lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);
    }
  }
  TokenDiff diff;
  size_t i = 0, j = 0;
  while (i < n && j < m) {
    if (a[i] == b[j]) {
      ++i, ++j;
    } else if (lcs[i][j + 1] >= lcs[i + 1][j]) {
      diff.inserted.push_back(j++);
    } else {
      diff.deleted.push_back(i++);
    }
  }
  for (; i < n; ++i) diff.deleted.push_back(i);
  for (; j < m; ++j) diff.inserted.push_back(j);
  return diff;
}

size_t WordCount(std::string_view s) { return WhitespaceTokens(s).size(); }

bool AllDigits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(),
                                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

std::vector<QuestionFocus> CandidateFoci(const MatchWorld& world, QuestionType qtype) {
  std::vector<QuestionFocus> foci;
  auto count = [&](EventKind kind, std::optional<int> agent) {
    return std::count_if(world.events.begin(), world.events.end(), [&](const Event& e) {
      return e.kind == kind && (!agent || e.agent == *agent);
    });
  };
  for (EventKind kind : kAllEventKinds) {
    switch (qtype) {
      case QuestionType::kArgmaxDistance:
      case QuestionType::kArgminDistance:
        if (HasDistance(kind) && count(kind, std::nullopt) >= 2) foci.push_back({kind, {}, {}});
        break;
      case QuestionType::kFirstScorer:
      case QuestionType::kLastScorer:
        if (count(kind, std::nullopt) >= 2) foci.push_back({kind, {}, {}});
        break;
      case QuestionType::kDistanceOfNamedEvent:
        if (!HasDistance(kind)) break;
        for (size_t p = 0; p < world.players.size(); ++p) {
          if (count(kind, static_cast<int>(p)) >= 2) {
            foci.push_back({kind, world.players[p].name, {}});
          }
        }
        break;
      case QuestionType::kAgentOfOrdinalEvent:
        for (int ordinal : {2, 3}) {
          if (count(kind, std::nullopt) >= ordinal + 1) foci.push_back({kind, {}, ordinal});
        }
        break;
    }
  }
  return foci;
}

Instance MakeInstance(const std::string& pair_id, Variant variant, const std::string& question,
                      const std::string& question_template, RealizedPassage passage,
                      const Answer& answer) {
  Instance inst;
  inst.instance_id = InstanceId(pair_id, variant);
  inst.question_text = question;
  const CharRange r = LocateAnswer(passage, answer);
  inst.answers.push_back(AnswerSpan{answer.text, r.begin});
  inst.meta.variant = variant;
  inst.meta.template_ids.push_back(question_template);
  for (auto& id : passage.TemplateIds()) inst.meta.template_ids.push_back(std::move(id));
  inst.passage = std::move(passage);
  return inst;
}

}  // namespace

std::string InstanceId(const std::string& pair_id, Variant variant) {
  return pair_id + "-" + std::string(Name(variant));
}

SamResult ApplySam(const MatchWorld& world, const RealizedPassage& passage, EventId target,
                   SamCategory category, uint64_t seed, const Lexicon& lexicon) {
  const auto lexemes = lexicon.SamLexemes(category);
  if (lexemes.empty()) {
    throw Error(ErrorKind::kConfiguration,
                "no lexeme for SAM category " + std::string(Name(category)));
  }
  Rng rng(seed);
  return ApplySamLexeme(world, passage, target, rng.Pick(lexemes), lexicon);
}

SamResult ApplySamLexeme(const MatchWorld& world, const RealizedPassage& passage,
                         EventId target, const SamLexeme& lexeme, const Lexicon& lexicon) {
  const Event& event = world.event(target);
  if (!event.polarity || !event.applied_modifications.empty()) {
    throw Error(ErrorKind::kDoubleModification,
                "event " + std::to_string(target.value) + " is already modified");
  }
  const auto verb = passage.Slot(target, "verb");
  if (!verb) {
    throw Error(ErrorKind::kConsistency,
                "event " + std::to_string(target.value) + " has no verb slot");
  }
  auto token = std::find_if(passage.tokens.begin(), passage.tokens.end(),
                            [&](const Token& t) { return t.range == *verb; });
  if (token == passage.tokens.end()) {
    throw Error(ErrorKind::kConsistency, "verb slot is not a token");
  }

  SamResult result{world, passage, Modification{lexeme.category, lexeme.surface,
                                                Attachment::kPreVerb, Semantics::kAltering}};
  auto tokens = TagWords(lexeme.surface, 0, lexicon, target);
  if (lexeme.verb_form == VerbForm::kPast) {
    SpliceText(result.passage, CharRange{verb->begin, verb->begin}, lexeme.surface + " ",
               std::move(tokens));
  } else {
    const std::string base = token->lemma;
    const size_t base_at = lexeme.surface.size() + 1;
    tokens.push_back(Token{{base_at, base_at + base.size()}, Pos::kVerb, base, target});
    SpliceText(result.passage, *verb, lexeme.surface + " " + base, std::move(tokens));
    result.passage.slot_spans[SlotKey{target, "verb"}] =
        CharRange{verb->begin + base_at, verb->begin + base_at + base.size()};
  }

  Event& modified = result.world.event(target);
  modified.polarity = false;
  modified.applied_modifications.push_back(result.modification);
  return result;
}

SpmResult ApplySpm(const RealizedPassage& passage, EventId target, const std::string& lexeme,
                   const Lexicon& lexicon) {
  const auto adverbials = lexicon.SamLexemes(SamCategory::kAdverbialModifier);
  if (std::none_of(adverbials.begin(), adverbials.end(),
                   [&](const SamLexeme& l) { return l.surface == lexeme; })) {
    throw Error(ErrorKind::kConfiguration, "'" + lexeme + "' is not an adverbial modifier");
  }
  const auto quantity = passage.Slot(target, "quantity");
  if (!quantity) {
    throw Error(ErrorKind::kNotApplicable,
                "event " + std::to_string(target.value) + " has no quantity in its sentence");
  }
  SpmResult result{passage, Modification{SamCategory::kAdverbialModifier, lexeme,
                                         Attachment::kPreNumeral, Semantics::kPreserving}};
  SpliceText(result.passage, CharRange{quantity->begin, quantity->begin}, lexeme + " ",
             TagWords(lexeme, 0, lexicon, target));
  return result;
}

AlignedPair BuildAlignedPair(const PairConfig& config, QuestionType qtype, int num_sam,
                             const std::vector<SamCategory>& categories, Partition partition,
                             uint64_t seed, const Grammar& grammar, const std::string& pair_id) {
  if (num_sam < 1) throw Error(ErrorKind::kConfiguration, "num_sam must be at least 1");
  if (categories.empty()) throw Error(ErrorKind::kConfiguration, "no SAM categories enabled");
  if (num_sam >= config.world.max_events) {
    throw Error(ErrorKind::kConfiguration,
                "num_sam " + std::to_string(num_sam) + " needs more than max_events " +
                    std::to_string(config.world.max_events) + " events");
  }
  WorldConfig world_config = config.world;
  world_config.min_events = std::max(world_config.min_events, num_sam + 1);
  ValidateConfig(world_config);
  const Lexicon& lexicon = grammar.lexicon();

  for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
    const uint64_t s = DeriveSeed(seed, static_cast<uint64_t>(attempt));
    Rng rng(DeriveSeed(s, 0));
    MatchWorld world = SimulateMatch(world_config, DeriveSeed(s, 1));

    const auto foci = CandidateFoci(world, qtype);
    if (foci.empty()) continue;
    const Question question{qtype, rng.Pick(foci)};
    const auto baseline_answer = TryOracleAnswer(world, question);
    if (!baseline_answer) continue;

    std::vector<EventId> targets{baseline_answer->source_event};
    std::vector<EventId> others;
    for (const auto& e : world.events) {
      if (e.id != baseline_answer->source_event) others.push_back(e.id);
    }
    rng.Shuffle(others);
    targets.insert(targets.end(), others.begin(), others.begin() + (num_sam - 1));
    std::vector<SamCategory> applied;
    for (size_t i = 0; i < targets.size(); ++i) applied.push_back(rng.Pick(categories));

    const RealizedPassage passage =
        RealizePassage(world, grammar, partition, DeriveSeed(s, 2), config.realizer);
    const RealizedQuestion realized_question =
        RealizeQuestion(question, grammar, partition, DeriveSeed(s, 3));

    MatchWorld modified_world = world;
    RealizedPassage modified_passage = passage;
    std::vector<Modification> modifications;
    for (size_t i = 0; i < targets.size(); ++i) {
      SamResult r = ApplySam(modified_world, modified_passage, targets[i], applied[i],
                             DeriveSeed(s, 10 + i), lexicon);
      modified_world = std::move(r.world);
      modified_passage = std::move(r.passage);
      modifications.push_back(std::move(r.modification));
    }
    const auto intervention_answer = TryOracleAnswer(modified_world, question);
    if (!intervention_answer || intervention_answer->text == baseline_answer->text) continue;
    // Distractor SAMs alone must leave the baseline answer in place.
    MatchWorld distractors_only = modified_world;
    distractors_only.event(targets.front()).polarity = true;
    const auto restored = TryOracleAnswer(distractors_only, question);
    if (!restored || restored->source_event != baseline_answer->source_event) continue;

    AlignedPair pair;
    pair.pair_id = pair_id;
    pair.baseline = MakeInstance(pair_id, Variant::kBaseline, realized_question.text,
                                 realized_question.template_id, passage, *baseline_answer);
    pair.intervention =
        MakeInstance(pair_id, Variant::kIntervention, realized_question.text,
                     realized_question.template_id, modified_passage, *intervention_answer);
    pair.intervention.meta.sam_categories = applied;
    pair.intervention.meta.num_sam = num_sam;
    pair.intervention.meta.modifications = modifications;

    const Event& critical = world.event(targets.front());
    if (config.spm_enabled && applied.front() == SamCategory::kAdverbialModifier &&
        HasDistance(critical.kind)) {
      SpmResult spm = ApplySpm(passage, critical.id, modifications.front().lexeme, lexicon);
      pair.spm = MakeInstance(pair_id, Variant::kSpm, realized_question.text,
                              realized_question.template_id, std::move(spm.passage),
                              OracleAnswer(world, question));
      pair.spm->meta.modifications.push_back(spm.modification);
    }
    for (Instance* inst : {&pair.baseline, &pair.intervention}) {
      inst->meta.qtype = qtype;
      inst->meta.partition = partition;
    }
    if (pair.spm) {
      pair.spm->meta.qtype = qtype;
      pair.spm->meta.partition = partition;
    }
    pair.trace = PairTrace{question, std::move(world), std::move(modified_world), targets, seed,
                           attempt + 1};
    return pair;
  }
  throw Error(ErrorKind::kGenerationExhausted,
              "pair " + pair_id + ": no valid " + std::string(Name(qtype)) + " pair after " +
                  std::to_string(config.max_attempts) + " attempts");
}

std::optional<std::vector<size_t>> InsertedTokens(std::string_view original,
                                                  std::string_view modified) {
  TokenDiff diff = DiffTokens(original, modified);
  if (!diff.deleted.empty()) return std::nullopt;
  return diff.inserted;
}

void ValidatePair(const AlignedPair& pair) {
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorKind::kConsistency, "pair " + pair.pair_id + ": " + msg);
  };
  std::vector<const Instance*> instances{&pair.baseline, &pair.intervention};
  if (pair.spm) instances.push_back(&*pair.spm);
  for (const Instance* inst : instances) {
    if (inst->question_text != pair.baseline.question_text) fail("questions differ");
    if (inst->answers.empty()) fail(inst->instance_id + " has no answer");
    for (const auto& a : inst->answers) {
      if (a.start > inst->passage.text.size() ||
          inst->passage.text.compare(a.start, a.text.size(), a.text) != 0) {
        fail(inst->instance_id + " answer '" + a.text + "' not at offset " +
             std::to_string(a.start));
      }
    }
  }
  if (pair.baseline.answers[0].text == pair.intervention.answers[0].text) {
    fail("baseline and intervention answers coincide");
  }
  if (pair.baseline.meta.num_sam != 0 || !pair.baseline.meta.sam_categories.empty()) {
    fail("baseline carries SAM metadata");
  }
  const InstanceMeta& im = pair.intervention.meta;
  if (im.num_sam < 1 || im.modifications.size() != static_cast<size_t>(im.num_sam)) {
    fail("intervention modification count does not match num_sam");
  }

  const TokenDiff diff = DiffTokens(pair.baseline.passage.text, pair.intervention.passage.text);
  size_t lexeme_words = 0;
  for (const auto& m : im.modifications) lexeme_words += WordCount(m.lexeme);
  if (diff.deleted.size() > im.modifications.size()) fail("diff deletes more than the verb slots");
  if (diff.inserted.size() != lexeme_words + diff.deleted.size()) {
    fail("diff is not confined to the inserted modifiers");
  }

  if (pair.trace && !pair.baseline.passage.sentences.empty()) {
    const auto& base = pair.baseline.passage;
    const auto& mod = pair.intervention.passage;
    if (base.sentences.size() != mod.sentences.size()) fail("sentence counts differ");
    const std::set<EventId> targets(pair.trace->sam_targets.begin(), pair.trace->sam_targets.end());
    for (size_t i = 0; i < base.sentences.size(); ++i) {
      const auto& s = base.sentences[i];
      if (s.event && targets.contains(*s.event)) continue;
      if (base.Slice(s.range) != mod.Slice(mod.sentences[i].range)) {
        fail("unmodified sentence " + std::to_string(i) + " changed");
      }
    }
  }

  if (pair.spm) {
    const Instance& spm = *pair.spm;
    if (spm.answers[0].text != pair.baseline.answers[0].text) fail("SPM label differs from baseline");
    if (spm.meta.modifications.size() != 1 ||
        spm.meta.modifications[0].semantics != Semantics::kPreserving) {
      fail("SPM instance must carry exactly one preserving modification");
    }
    const auto inserted = InsertedTokens(pair.baseline.passage.text, spm.passage.text);
    if (!inserted) fail("SPM diff deletes tokens");
    if (inserted->size() != WordCount(spm.meta.modifications[0].lexeme)) {
      fail("SPM diff inserts more than the lexeme");
    }
    const auto tokens = WhitespaceTokens(spm.passage.text);
    const size_t next = inserted->back() + 1;
    if (next >= tokens.size() || !AllDigits(tokens[next])) fail("SPM lexeme is not pre-numeral");
  }
}

}  // namespace samforge
