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

#include <algorithm>
#include <cctype>

#include "samforge/errors.h"
#include "samforge/rng.h"

namespace samforge {
namespace {

std::string Capitalized(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

std::string OrdinalWord(int n) {
  static const char* kWords[] = {"zeroth", "first", "second", "third", "fourth", "fifth",
                                 "sixth",  "seventh", "eighth", "ninth", "tenth"};
  if (n >= 0 && n <= 10) return kWords[n];
  return std::to_string(n) + "th";
}

class SentenceWriter {
 public:
  SentenceWriter(RealizedPassage& passage, const Lexicon& lexicon, std::optional<EventId> event)
      : passage_(passage), lexicon_(lexicon), event_(event) {
    if (!passage_.text.empty()) passage_.text += ' ';
    start_ = passage_.text.size();
  }

  void Literal(std::string_view text) {
    auto tokens = TagWords(text, passage_.text.size(), lexicon_, event_);
    passage_.text += text;
    passage_.tokens.insert(passage_.tokens.end(), tokens.begin(), tokens.end());
  }

  // Appends one token-sized value and returns its range.
  CharRange Word(std::string_view value, Pos pos, std::string lemma) {
    const CharRange r{passage_.text.size(), passage_.text.size() + value.size()};
    passage_.text += value;
    passage_.tokens.push_back(Token{r, pos, std::move(lemma), event_});
    return r;
  }

  void Slot(std::string slot, CharRange r) {
    if (event_) passage_.slot_spans[SlotKey{*event_, std::move(slot)}] = r;
  }

  void Finish(std::string template_id) {
    passage_.sentences.push_back(
        Sentence{{start_, passage_.text.size()}, event_, std::move(template_id)});
  }

 private:
  RealizedPassage& passage_;
  const Lexicon& lexicon_;
  std::optional<EventId> event_;
  size_t start_ = 0;
};

}  // namespace

std::optional<CharRange> RealizedPassage::Slot(EventId event, std::string_view slot) const {
  auto it = slot_spans.find(SlotKey{event, std::string(slot)});
  if (it == slot_spans.end()) return std::nullopt;
  return it->second;
}

const Sentence* RealizedPassage::SentenceFor(EventId event) const {
  for (const auto& s : sentences) {
    if (s.event == event) return &s;
  }
  return nullptr;
}

std::vector<std::string> RealizedPassage::TemplateIds() const {
  std::vector<std::string> ids;
  for (const auto& s : sentences) ids.push_back(s.template_id);
  return ids;
}

std::vector<Token> TagWords(std::string_view text, size_t offset, const Lexicon& lexicon,
                            std::optional<EventId> event) {
  std::vector<Token> tokens;
  for (const auto& span : WordSpans(text)) {
    const std::string_view word = text.substr(span.begin, span.size());
    const LexEntry* entry = lexicon.Lookup(word);
    if (!entry) {
      throw Error(ErrorKind::kConfiguration, "word '" + std::string(word) + "' not in lexicon");
    }
    tokens.push_back(
        Token{{offset + span.begin, offset + span.end}, entry->pos, entry->lemma, event});
  }
  return tokens;
}

RealizedPassage RealizePassage(const MatchWorld& world, const Grammar& grammar,
                               Partition partition, uint64_t seed,
                               const RealizerOptions& options) {
  Rng rng(seed);
  const Lexicon& lexicon = grammar.lexicon();
  RealizedPassage passage;

  if (options.connectives) {
    const auto candidates = grammar.Connectives(partition);
    if (candidates.empty()) {
      throw Error(ErrorKind::kGeneration,
                  "no connective template in partition " + std::string(Name(partition)));
    }
    const Template& t = *rng.Pick(candidates);
    SentenceWriter w(passage, lexicon, std::nullopt);
    for (const auto& piece : ParsePattern(t.pattern)) {
      if (!piece.is_slot) {
        w.Literal(piece.text);
      } else {
        const std::string& team = world.teams[piece.text == "team" ? 0 : 1];
        w.Word(team, Pos::kPropn, team);
      }
    }
    w.Finish(t.id);
  }

  std::optional<int> previous_agent;
  std::optional<CharRange> previous_name;
  for (const Event& event : world.events) {
    const auto candidates = grammar.Sentences(event.kind, partition);
    if (candidates.empty()) {
      throw Error(ErrorKind::kGeneration, "no sentence template for " +
                                              std::string(Name(event.kind)) + " in partition " +
                                              std::string(Name(partition)));
    }
    const Template& t = *rng.Pick(candidates);
    const auto verbs = lexicon.ByClass("success:" + t.verb_class());
    const LexEntry& verb = *rng.Pick(verbs);
    const auto pieces = ParsePattern(t.pattern);
    const Player& agent = world.agent_of(event);

    const double draw = rng.UniformReal();
    const bool agent_first = !pieces.empty() && pieces.front().is_slot && pieces.front().text == "agent";
    const bool pronominal = t.allows_pronoun() && agent_first && previous_agent == event.agent &&
                            previous_name.has_value() && draw < options.pronoun_probability;

    SentenceWriter w(passage, lexicon, event.id);
    std::optional<CharRange> named_at;
    for (const auto& piece : pieces) {
      if (!piece.is_slot) {
        w.Literal(piece.text);
        continue;
      }
      const std::string& slot = piece.text;
      if (slot == "agent") {
        if (pronominal) {
          const std::string pronoun = agent.pronoun == Pronoun::kShe ? "she" : "he";
          w.Slot("agent", w.Word(Capitalized(pronoun), Pos::kPronoun, pronoun));
          w.Slot("agent_name", *previous_name);
        } else {
          const CharRange r = w.Word(agent.name, Pos::kPropn, agent.name);
          w.Slot("agent", r);
          w.Slot("agent_name", r);
          named_at = r;
        }
      } else if (slot == "verb") {
        w.Slot("verb", w.Word(verb.surface, Pos::kVerb, verb.lemma));
      } else if (slot == "distance") {
        const std::string number = std::to_string(event.quantity.value);
        const CharRange num = w.Word(number, Pos::kNum, number);
        w.Literal(" ");
        const LexEntry* unit = lexicon.Lookup(event.quantity.unit);
        const CharRange u = w.Word(event.quantity.unit, Pos::kNoun,
                                   unit ? unit->lemma : event.quantity.unit);
        w.Slot("quantity", num);
        w.Slot("distance", CharRange{num.begin, u.end});
      } else if (slot == "minute") {
        const std::string minute = std::to_string(event.minute);
        w.Slot("minute", w.Word(minute, Pos::kNum, minute));
      } else if (slot == "team") {
        const std::string& team = world.teams[static_cast<size_t>(agent.team)];
        w.Slot("team", w.Word(team, Pos::kPropn, team));
      } else {
        throw Error(ErrorKind::kConfiguration, "template " + t.id + ": unknown slot {" + slot + "}");
      }
    }
    w.Finish(t.id);
    previous_agent = event.agent;
    previous_name = named_at;
  }
  return passage;
}

RealizedQuestion RealizeQuestion(const Question& question, const Grammar& grammar,
                                 Partition partition, uint64_t seed) {
  const auto candidates = grammar.Questions(question.qtype, partition);
  if (candidates.empty()) {
    throw Error(ErrorKind::kGeneration, "no question template for " +
                                            std::string(Name(question.qtype)) + " in partition " +
                                            std::string(Name(partition)));
  }
  Rng rng(seed);
  const Template& t = *rng.Pick(candidates);
  const Template& phrase = grammar.Phrase(question.focus.kind);

  RealizedQuestion out;
  out.template_id = t.id;
  for (const auto& piece : ParsePattern(t.pattern)) {
    if (!piece.is_slot) {
      out.text += piece.text;
    } else if (piece.text == "qverb" || piece.text == "qnoun") {
      out.text += phrase.anchors.at(piece.text);
    } else if (piece.text == "player") {
      if (!question.focus.player) {
        throw Error(ErrorKind::kGeneration, "template " + t.id + " needs a player focus");
      }
      out.text += *question.focus.player;
    } else if (piece.text == "ordinal") {
      if (!question.focus.ordinal) {
        throw Error(ErrorKind::kGeneration, "template " + t.id + " needs an ordinal focus");
      }
      out.text += OrdinalWord(*question.focus.ordinal);
    } else {
      throw Error(ErrorKind::kConfiguration, "template " + t.id + ": unknown slot {" + piece.text + "}");
    }
  }
  return out;
}

CharRange LocateAnswer(const RealizedPassage& passage, const Answer& answer) {
  const bool distance = std::holds_alternative<Quantity>(answer.value);
  const char* slot = distance ? "distance" : "agent_name";
  const auto range = passage.Slot(answer.source_event, slot);
  if (!range) {
    throw Error(ErrorKind::kConsistency, std::string("no ") + slot + " slot for event " +
                                             std::to_string(answer.source_event.value));
  }
  if (passage.Slice(*range) != answer.text) {
    throw Error(ErrorKind::kConsistency, "slot text '" + std::string(passage.Slice(*range)) +
                                             "' does not match answer '" + answer.text + "'");
  }
  return *range;
}

void SpliceText(RealizedPassage& passage, CharRange erase, std::string_view insert,
                std::vector<Token> new_tokens) {
  const size_t pos = erase.begin;
  const size_t old_end = erase.end;
  const auto delta = static_cast<std::ptrdiff_t>(insert.size()) - static_cast<std::ptrdiff_t>(erase.size());
  auto shift = [delta](size_t& offset) { offset = static_cast<size_t>(static_cast<std::ptrdiff_t>(offset) + delta); };
  auto inside = [&](CharRange r) { return erase.size() > 0 && r.begin >= pos && r.end <= old_end; };

  passage.text.replace(pos, erase.size(), insert);

  std::vector<Token> tokens;
  tokens.reserve(passage.tokens.size() + new_tokens.size());
  bool merged = false;
  auto merge_new = [&] {
    for (auto& t : new_tokens) {
      t.range.begin += pos;
      t.range.end += pos;
      tokens.push_back(std::move(t));
    }
    merged = true;
  };
  for (auto& t : passage.tokens) {
    if (inside(t.range)) continue;
    if (t.range.begin >= old_end) {
      if (!merged) merge_new();
      shift(t.range.begin);
      shift(t.range.end);
    }
    tokens.push_back(std::move(t));
  }
  if (!merged) merge_new();
  passage.tokens = std::move(tokens);

  for (auto& s : passage.sentences) {
    if (s.range.begin >= old_end && s.range.begin > pos) {
      shift(s.range.begin);
      shift(s.range.end);
    } else if (s.range.begin <= pos && s.range.end >= old_end) {
      shift(s.range.end);
    }
  }

  for (auto it = passage.slot_spans.begin(); it != passage.slot_spans.end();) {
    CharRange& r = it->second;
    if (inside(r)) {
      it = passage.slot_spans.erase(it);
      continue;
    }
    if (r.begin >= old_end) {
      shift(r.begin);
      shift(r.end);
    } else if (r.begin <= pos && r.end >= old_end) {
      shift(r.end);
    }
    ++it;
  }
}

}  // namespace samforge
