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

#ifndef SAMFORGE_GRAMMAR_H_
#define SAMFORGE_GRAMMAR_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "samforge/types.h"

namespace samforge {

struct LexEntry {
  std::string surface;
  std::string lemma;
  Pos pos = Pos::kNoun;
  std::string semantic_class;
};

enum class VerbForm { kPast, kBase };

// A SAM lexeme and the verb form it takes ("almost kicked", "failed to kick").
struct SamLexeme {
  SamCategory category = SamCategory::kAdverbialModifier;
  std::string surface;
  VerbForm verb_form = VerbForm::kPast;
};

class Lexicon {
 public:
  // Throws a configuration error on a duplicate (surface, class) entry or
  // when a surface is both a success and a failure verb.
  void Add(LexEntry entry);

  // First single-word entry with this lowercased surface.
  const LexEntry* Lookup(std::string_view surface) const;

  std::vector<const LexEntry*> ByClass(std::string_view semantic_class) const;
  std::vector<SamLexeme> SamLexemes(SamCategory category) const;
  const std::vector<LexEntry>& entries() const { return entries_; }

 private:
  std::vector<LexEntry> entries_;
  std::map<std::string, size_t, std::less<>> by_surface_;
};

enum class TemplateTarget { kSentence, kQuestion, kConnective, kPhrase };

struct Template {
  std::string id;
  TemplateTarget target = TemplateTarget::kSentence;
  std::optional<EventKind> event_kind;  // sentence and phrase rows
  std::optional<QuestionType> qtype;    // question rows
  std::optional<Partition> partition;   // nullopt for partition-independent phrase rows
  std::string pattern;
  std::map<std::string, std::string> anchors;
  // Sentence rows: word-token index of the {verb} slot in the realized
  // sentence, i.e. the SAM insertion point.
  int verb_slot_anchor = -1;

  const std::string& verb_class() const { return anchors.at("verb"); }
  bool allows_pronoun() const;
};

// A piece of a parsed pattern: literal text or a {slot}.
struct PatternPiece {
  bool is_slot = false;
  std::string text;  // literal text, or the slot name
};

std::vector<PatternPiece> ParsePattern(std::string_view pattern);

// Word tokens of literal template text, as [begin, end) offsets.
std::vector<CharRange> WordSpans(std::string_view text);

// Number of word tokens a filled sentence slot contributes.
int SlotTokenCount(std::string_view slot);

class Grammar {
 public:
  Grammar(Lexicon lexicon, std::vector<Template> templates);

  const Lexicon& lexicon() const { return lexicon_; }
  const std::vector<Template>& templates() const { return templates_; }
  const Template& ById(std::string_view id) const;

  std::vector<const Template*> Sentences(EventKind kind, Partition partition) const;
  std::vector<const Template*> Questions(QuestionType qtype, Partition partition) const;
  std::vector<const Template*> Connectives(Partition partition) const;
  // qverb/qnoun surface strings for a kind.
  const Template& Phrase(EventKind kind) const;

  // Copy restricted to templates satisfying `keep` (phrase rows are kept).
  template <typename Pred>
  Grammar Filtered(Pred keep) const {
    std::vector<Template> kept;
    for (const auto& t : templates_) {
      if (t.target == TemplateTarget::kPhrase || keep(t)) kept.push_back(t);
    }
    return Grammar(lexicon_, std::move(kept));
  }

 private:
  Lexicon lexicon_;
  std::vector<Template> templates_;
};

// Tab-separated readers. `source` names the input in error messages, which
// carry the offending line number.
Lexicon ParseLexicon(std::string_view tsv, std::string_view source = "lexicon");
std::vector<Template> ParseTemplates(std::string_view tsv, std::string_view source = "templates");

// Checks every template against the lexicon: known slots, exactly one {verb}
// and {agent} per sentence row, verb classes present, every literal word in
// passage-bound rows tagged. Throws a configuration error.
void ValidateGrammar(const Grammar& grammar);

Grammar LoadGrammar(const std::string& templates_path, const std::string& lexicon_path);

// Grammar compiled into the library (data/templates.tsv, data/lexicon.tsv).
const Grammar& DefaultGrammar();

}  // namespace samforge

#endif  // SAMFORGE_GRAMMAR_H_
