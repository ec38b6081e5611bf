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

#include "samforge/grammar.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "samforge/errors.h"

namespace samforge {
namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool IsWordChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '\'';
}

std::vector<std::string> SplitTabs(std::string_view line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    const size_t tab = line.find('\t', start);
    fields.emplace_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

// Calls fn(line_number, fields) for every non-blank, non-comment line.
template <typename Fn>
void ForEachRow(std::string_view tsv, Fn fn) {
  size_t line_no = 0;
  size_t start = 0;
  while (start <= tsv.size()) {
    size_t nl = tsv.find('\n', start);
    if (nl == std::string_view::npos) nl = tsv.size();
    std::string_view line = tsv.substr(start, nl - start);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty() && line.front() != '#') fn(line_no, SplitTabs(line));
    start = nl + 1;
  }
}

[[noreturn]] void RowError(std::string_view source, size_t line, const std::string& msg) {
  throw Error(ErrorKind::kConfiguration,
              std::string(source) + ":" + std::to_string(line) + ": " + msg);
}

constexpr std::string_view kSentenceSlots[] = {"agent", "verb", "distance", "minute", "team"};
constexpr std::string_view kConnectiveSlots[] = {"team", "team2"};
constexpr std::string_view kQuestionSlots[] = {"qverb", "qnoun", "player", "ordinal"};

template <size_t N>
bool Contains(const std::string_view (&set)[N], std::string_view s) {
  return std::find(std::begin(set), std::end(set), s) != std::end(set);
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

#include "samforge_default_grammar.inc"

}  // namespace

void Lexicon::Add(LexEntry entry) {
  for (const auto& e : entries_) {
    if (e.surface == entry.surface && e.semantic_class == entry.semantic_class) {
      throw Error(ErrorKind::kConfiguration,
                  "duplicate lexicon entry '" + entry.surface + "' in class " + entry.semantic_class);
    }
    const bool success_failure =
        (e.semantic_class == "failure" && entry.semantic_class.starts_with("success:")) ||
        (entry.semantic_class == "failure" && e.semantic_class.starts_with("success:"));
    if (success_failure && e.surface == entry.surface) {
      throw Error(ErrorKind::kConfiguration,
                  "'" + entry.surface + "' is both a success and a failure verb");
    }
  }
  const std::string key = Lower(entry.surface);
  const bool single_word = key.find(' ') == std::string::npos;
  entries_.push_back(std::move(entry));
  if (single_word && !by_surface_.contains(key)) by_surface_.emplace(key, entries_.size() - 1);
}

const LexEntry* Lexicon::Lookup(std::string_view surface) const {
  auto it = by_surface_.find(Lower(surface));
  return it == by_surface_.end() ? nullptr : &entries_[it->second];
}

std::vector<const LexEntry*> Lexicon::ByClass(std::string_view semantic_class) const {
  std::vector<const LexEntry*> out;
  for (const auto& e : entries_) {
    if (e.semantic_class == semantic_class) out.push_back(&e);
  }
  return out;
}

std::vector<SamLexeme> Lexicon::SamLexemes(SamCategory category) const {
  const std::string prefix = "sam:" + std::string(Name(category)) + ":";
  std::vector<SamLexeme> out;
  for (const auto& e : entries_) {
    if (!e.semantic_class.starts_with(prefix)) continue;
    const std::string_view form = std::string_view(e.semantic_class).substr(prefix.size());
    out.push_back(SamLexeme{category, e.surface, form == "base" ? VerbForm::kBase : VerbForm::kPast});
  }
  return out;
}

bool Template::allows_pronoun() const {
  auto it = anchors.find("pronoun");
  return it == anchors.end() || it->second != "no";
}

std::vector<PatternPiece> ParsePattern(std::string_view pattern) {
  std::vector<PatternPiece> pieces;
  size_t pos = 0;
  while (pos < pattern.size()) {
    const size_t open = pattern.find('{', pos);
    if (open == std::string_view::npos) {
      pieces.push_back({false, std::string(pattern.substr(pos))});
      break;
    }
    if (open > pos) pieces.push_back({false, std::string(pattern.substr(pos, open - pos))});
    const size_t close = pattern.find('}', open);
    if (close == std::string_view::npos) {
      throw Error(ErrorKind::kConfiguration, "unterminated slot in '" + std::string(pattern) + "'");
    }
    pieces.push_back({true, std::string(pattern.substr(open + 1, close - open - 1))});
    pos = close + 1;
  }
  return pieces;
}

std::vector<CharRange> WordSpans(std::string_view text) {
  std::vector<CharRange> spans;
  size_t i = 0;
  while (i < text.size()) {
    if (!IsWordChar(text[i])) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < text.size() && IsWordChar(text[j])) ++j;
    spans.push_back({i, j});
    i = j;
  }
  return spans;
}

int SlotTokenCount(std::string_view slot) { return slot == "distance" ? 2 : 1; }

Grammar::Grammar(Lexicon lexicon, std::vector<Template> templates)
    : lexicon_(std::move(lexicon)), templates_(std::move(templates)) {
  for (auto& t : templates_) {
    if (t.target != TemplateTarget::kSentence) continue;
    int index = 0;
    for (const auto& piece : ParsePattern(t.pattern)) {
      if (piece.is_slot) {
        if (piece.text == "verb") t.verb_slot_anchor = index;
        index += SlotTokenCount(piece.text);
      } else {
        index += static_cast<int>(WordSpans(piece.text).size());
      }
    }
  }
}

const Template& Grammar::ById(std::string_view id) const {
  for (const auto& t : templates_) {
    if (t.id == id) return t;
  }
  throw Error(ErrorKind::kConfiguration, "unknown template id " + std::string(id));
}

std::vector<const Template*> Grammar::Sentences(EventKind kind, Partition partition) const {
  std::vector<const Template*> out;
  for (const auto& t : templates_) {
    if (t.target == TemplateTarget::kSentence && t.event_kind == kind && t.partition == partition)
      out.push_back(&t);
  }
  return out;
}

std::vector<const Template*> Grammar::Questions(QuestionType qtype, Partition partition) const {
  std::vector<const Template*> out;
  for (const auto& t : templates_) {
    if (t.target == TemplateTarget::kQuestion && t.qtype == qtype && t.partition == partition)
      out.push_back(&t);
  }
  return out;
}

std::vector<const Template*> Grammar::Connectives(Partition partition) const {
  std::vector<const Template*> out;
  for (const auto& t : templates_) {
    if (t.target == TemplateTarget::kConnective && t.partition == partition) out.push_back(&t);
  }
  return out;
}

const Template& Grammar::Phrase(EventKind kind) const {
  for (const auto& t : templates_) {
    if (t.target == TemplateTarget::kPhrase && t.event_kind == kind) return t;
  }
  throw Error(ErrorKind::kGeneration, "no phrase row for " + std::string(Name(kind)));
}

Lexicon ParseLexicon(std::string_view tsv, std::string_view source) {
  Lexicon lexicon;
  ForEachRow(tsv, [&](size_t line, const std::vector<std::string>& f) {
    if (f.size() != 4) RowError(source, line, "expected 4 tab-separated fields");
    if (f[0].empty() || f[1].empty()) RowError(source, line, "empty surface or lemma");
    try {
      lexicon.Add(LexEntry{f[0], f[1], ParsePos(f[2]), f[3]});
    } catch (const Error& e) {
      RowError(source, line, e.what());
    }
  });
  return lexicon;
}

std::vector<Template> ParseTemplates(std::string_view tsv, std::string_view source) {
  std::vector<Template> templates;
  std::set<std::string> ids;
  ForEachRow(tsv, [&](size_t line, std::vector<std::string> f) {
    if (f.size() == 4) f.emplace_back();
    if (f.size() != 5) RowError(source, line, "expected 5 tab-separated fields");
    Template t;
    t.id = f[0];
    if (t.id.empty() || !ids.insert(t.id).second) RowError(source, line, "missing or duplicate id");
    try {
      const std::string& target = f[1];
      if (target.starts_with("sentence:")) {
        t.target = TemplateTarget::kSentence;
        t.event_kind = ParseEventKind(std::string_view(target).substr(9));
      } else if (target.starts_with("question:")) {
        t.target = TemplateTarget::kQuestion;
        t.qtype = ParseQuestionType(std::string_view(target).substr(9));
      } else if (target.starts_with("phrase:")) {
        t.target = TemplateTarget::kPhrase;
        t.event_kind = ParseEventKind(std::string_view(target).substr(7));
      } else if (target == "connective") {
        t.target = TemplateTarget::kConnective;
      } else {
        RowError(source, line, "unknown target '" + target + "'");
      }
      if (f[2] != "any") t.partition = ParsePartition(f[2]);
      if (!t.partition && t.target != TemplateTarget::kPhrase)
        RowError(source, line, "only phrase rows may use partition 'any'");
    } catch (const Error& e) {
      RowError(source, line, e.what());
    }
    t.pattern = f[3];
    std::string_view anchors = f[4];
    while (!anchors.empty()) {
      const size_t semi = anchors.find(';');
      std::string_view kv = anchors.substr(0, semi);
      const size_t eq = kv.find('=');
      if (eq == std::string_view::npos) RowError(source, line, "anchor without '='");
      t.anchors[std::string(kv.substr(0, eq))] = std::string(kv.substr(eq + 1));
      anchors = semi == std::string_view::npos ? std::string_view{} : anchors.substr(semi + 1);
    }
    templates.push_back(std::move(t));
  });
  return templates;
}

void ValidateGrammar(const Grammar& grammar) {
  const Lexicon& lex = grammar.lexicon();
  auto fail = [](const Template& t, const std::string& msg) {
    throw Error(ErrorKind::kConfiguration, "template " + t.id + ": " + msg);
  };
  for (const auto& t : grammar.templates()) {
    if (t.target == TemplateTarget::kPhrase) {
      if (!t.anchors.contains("qverb") || !t.anchors.contains("qnoun"))
        fail(t, "phrase rows need qverb= and qnoun= anchors");
      continue;
    }
    const auto pieces = ParsePattern(t.pattern);
    int verbs = 0, agents = 0;
    for (const auto& p : pieces) {
      if (!p.is_slot) {
        if (t.target == TemplateTarget::kQuestion) continue;
        for (const auto& span : WordSpans(p.text)) {
          const std::string word = p.text.substr(span.begin, span.size());
          if (!lex.Lookup(word)) fail(t, "word '" + word + "' missing from lexicon");
        }
        continue;
      }
      const bool known = t.target == TemplateTarget::kSentence     ? Contains(kSentenceSlots, p.text)
                         : t.target == TemplateTarget::kConnective ? Contains(kConnectiveSlots, p.text)
                                                                   : Contains(kQuestionSlots, p.text);
      if (!known) fail(t, "unknown slot {" + p.text + "}");
      verbs += p.text == "verb";
      agents += p.text == "agent";
    }
    if (t.target == TemplateTarget::kSentence) {
      if (verbs != 1 || agents != 1) fail(t, "sentence rows need exactly one {verb} and one {agent}");
      if (!t.anchors.contains("verb")) fail(t, "missing verb= anchor");
      if (lex.ByClass("success:" + t.verb_class()).empty())
        fail(t, "no success verbs in class " + t.verb_class());
    }
  }
  for (const auto& e : lex.entries()) {
    if (!e.semantic_class.starts_with("sam:")) continue;
    for (const auto& span : WordSpans(e.surface)) {
      const std::string word = e.surface.substr(span.begin, span.size());
      if (!lex.Lookup(word)) {
        throw Error(ErrorKind::kConfiguration,
                    "SAM lexeme word '" + word + "' has no single-word lexicon entry");
      }
    }
  }
}

Grammar LoadGrammar(const std::string& templates_path, const std::string& lexicon_path) {
  Grammar grammar(ParseLexicon(ReadFile(lexicon_path), lexicon_path),
                  ParseTemplates(ReadFile(templates_path), templates_path));
  ValidateGrammar(grammar);
  return grammar;
}

const Grammar& DefaultGrammar() {
  static const Grammar grammar = [] {
    Grammar g(ParseLexicon(kDefaultLexicon, "lexicon.tsv"),
              ParseTemplates(kDefaultTemplates, "templates.tsv"));
    ValidateGrammar(g);
    return g;
  }();
  return grammar;
}

}  // namespace samforge
