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

#include "samforge/formats.h"

#include <openssl/evp.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "samforge/errors.h"

namespace samforge {

using ojson = nlohmann::ordered_json;

namespace {

constexpr std::string_view kJsonlFormat = "samforge-aligned-jsonl";
constexpr std::string_view kCorpusFormat = "samforge-corpus";

bool IsContinuation(unsigned char c) { return (c & 0xC0) == 0x80; }

[[noreturn]] void ParseFail(std::string_view source, const std::string& where, const std::string& msg) {
  throw Error(ErrorKind::kParse, std::string(source) + (where.empty() ? "" : ":" + where) + ": " + msg);
}

ojson InstanceRecord(const AlignedPair& pair, const Instance& inst) {
  ojson r;
  r["pair_id"] = pair.pair_id;
  r["instance_id"] = inst.instance_id;
  r["variant"] = Name(inst.meta.variant);
  r["qtype"] = Name(inst.meta.qtype);
  auto cats = ojson::array();
  for (SamCategory c : inst.meta.sam_categories) cats.push_back(Name(c));
  r["sam_categories"] = std::move(cats);
  r["num_sam"] = inst.meta.num_sam;
  r["question"] = inst.question_text;
  r["passage"] = inst.passage.text;
  auto answers = ojson::array();
  for (const auto& a : inst.answers) {
    if (a.start > inst.passage.text.size() ||
        inst.passage.text.compare(a.start, a.text.size(), a.text) != 0) {
      throw Error(ErrorKind::kConsistency,
                  inst.instance_id + ": answer '" + a.text + "' does not match its offset");
    }
    answers.push_back(ojson{{"text", a.text},
                            {"answer_start", ByteToScalarOffset(inst.passage.text, a.start)}});
  }
  r["answers"] = std::move(answers);
  r["template_ids"] = inst.meta.template_ids;
  r["partition"] = Name(inst.meta.partition);
  auto mods = ojson::array();
  for (const auto& m : inst.meta.modifications) {
    mods.push_back(ojson{{"category", Name(m.category)},
                         {"lexeme", m.lexeme},
                         {"attachment", m.attachment == Attachment::kPreVerb ? "pre-verb" : "pre-numeral"},
                         {"semantics", m.semantics == Semantics::kAltering ? "altering" : "preserving"}});
  }
  r["modifications"] = std::move(mods);
  return r;
}

std::vector<const Instance*> InstancesOf(const AlignedPair& pair) {
  std::vector<const Instance*> out{&pair.baseline, &pair.intervention};
  if (pair.spm) out.push_back(&*pair.spm);
  return out;
}

std::vector<AnswerSpan> ReadAnswers(const ojson& answers, const std::string& passage,
                                    std::string_view source, const std::string& where) {
  if (!answers.is_array() || answers.empty()) ParseFail(source, where, "answers must be a non-empty array");
  std::vector<AnswerSpan> out;
  for (const auto& a : answers) {
    AnswerSpan span;
    span.text = a.at("text").get<std::string>();
    const auto scalar = a.at("answer_start").get<size_t>();
    span.start = ScalarToByteOffset(passage, scalar);
    if (passage.compare(span.start, span.text.size(), span.text) != 0) {
      ParseFail(source, where, "answer '" + span.text + "' not found at answer_start " + std::to_string(scalar));
    }
    out.push_back(std::move(span));
  }
  return out;
}

// Groups instances into pairs in first-appearance order.
class PairAssembler {
 public:
  explicit PairAssembler(std::string_view source) : source_(source) {}

  void Add(const std::string& pair_id, Instance inst, const std::string& where) {
    auto [it, inserted] = index_.try_emplace(pair_id, pairs_.size());
    if (inserted) {
      pairs_.emplace_back();
      pairs_.back().pair_id = pair_id;
      seen_.emplace_back();
    }
    AlignedPair& pair = pairs_[it->second];
    const Variant v = inst.meta.variant;
    if (!seen_[it->second].insert(v).second) {
      ParseFail(source_, where, "duplicate " + std::string(Name(v)) + " for pair " + pair_id);
    }
    switch (v) {
      case Variant::kBaseline: pair.baseline = std::move(inst); break;
      case Variant::kIntervention: pair.intervention = std::move(inst); break;
      case Variant::kSpm: pair.spm = std::move(inst); break;
    }
  }

  std::vector<AlignedPair> Finish() {
    for (size_t i = 0; i < pairs_.size(); ++i) {
      if (!seen_[i].contains(Variant::kBaseline) || !seen_[i].contains(Variant::kIntervention)) {
        ParseFail(source_, "", "pair " + pairs_[i].pair_id + " lacks a baseline or intervention");
      }
    }
    return std::move(pairs_);
  }

 private:
  std::string_view source_;
  std::map<std::string, size_t> index_;
  std::vector<AlignedPair> pairs_;
  std::vector<std::set<Variant>> seen_;
};

Variant VariantFromId(const std::string& id, std::string_view source) {
  for (Variant v : {Variant::kBaseline, Variant::kIntervention, Variant::kSpm}) {
    const std::string suffix = "-" + std::string(Name(v));
    if (id.size() > suffix.size() && id.ends_with(suffix)) return v;
  }
  ParseFail(source, "", "qa id '" + id + "' is not of the form {pair_id}-{variant}");
}

ojson RangeJson(CharRange r, std::string_view text) {
  return ojson::array({ByteToScalarOffset(text, r.begin), ByteToScalarOffset(text, r.end)});
}

CharRange RangeFrom(const ojson& j, std::string_view text, std::string_view source, const std::string& where) {
  if (!j.is_array() || j.size() != 2) ParseFail(source, where, "range must be [begin, end]");
  const CharRange r{ScalarToByteOffset(text, j[0].get<size_t>()), ScalarToByteOffset(text, j[1].get<size_t>())};
  if (r.begin > r.end) ParseFail(source, where, "range begin after end");
  return r;
}

}  // namespace

size_t ByteToScalarOffset(std::string_view utf8, size_t byte_offset) {
  size_t scalars = 0;
  for (size_t i = 0; i < byte_offset && i < utf8.size(); ++i) {
    if (!IsContinuation(static_cast<unsigned char>(utf8[i]))) ++scalars;
  }
  return scalars;
}

size_t ScalarToByteOffset(std::string_view utf8, size_t scalar_offset) {
  size_t scalars = 0;
  for (size_t i = 0; i < utf8.size(); ++i) {
    if (IsContinuation(static_cast<unsigned char>(utf8[i]))) continue;
    if (scalars == scalar_offset) return i;
    ++scalars;
  }
  if (scalars == scalar_offset) return utf8.size();
  throw Error(ErrorKind::kParse, "offset " + std::to_string(scalar_offset) + " past end of text");
}

std::string WriteAlignedJsonl(std::span<const AlignedPair> pairs) {
  std::string out;
  out += ojson{{"format", kJsonlFormat}, {"version", 1}, {"offset_unit", kOffsetUnit}}.dump();
  out += '\n';
  for (const auto& pair : pairs) {
    for (const Instance* inst : InstancesOf(pair)) {
      out += InstanceRecord(pair, *inst).dump();
      out += '\n';
    }
  }
  return out;
}

std::vector<AlignedPair> ReadAlignedJsonl(std::string_view text, std::string_view source) {
  PairAssembler assembler(source);
  size_t line_no = 0;
  size_t start = 0;
  bool header = false;
  while (start < text.size()) {
    size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = text.substr(start, nl - start);
    start = nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = "line " + std::to_string(line_no);
    ojson j = ParseJson(line, std::string(source) + ":" + where);
    if (!header) {
      if (!j.is_object() || j.value("format", "") != kJsonlFormat) {
        ParseFail(source, where, "missing aligned-jsonl header");
      }
      if (j.value("offset_unit", "") != kOffsetUnit) ParseFail(source, where, "unsupported offset_unit");
      header = true;
      continue;
    }
    try {
      Instance inst;
      inst.instance_id = j.at("instance_id").get<std::string>();
      inst.question_text = j.at("question").get<std::string>();
      inst.passage.text = j.at("passage").get<std::string>();
      inst.meta.variant = ParseVariant(j.at("variant").get<std::string>());
      inst.meta.qtype = ParseQuestionType(j.at("qtype").get<std::string>());
      for (const auto& c : j.at("sam_categories")) inst.meta.sam_categories.push_back(ParseSamCategory(c.get<std::string>()));
      inst.meta.num_sam = j.at("num_sam").get<int>();
      inst.meta.template_ids = j.at("template_ids").get<std::vector<std::string>>();
      inst.meta.partition = ParsePartition(j.at("partition").get<std::string>());
      for (const auto& m : j.at("modifications")) {
        Modification mod;
        mod.category = ParseSamCategory(m.at("category").get<std::string>());
        mod.lexeme = m.at("lexeme").get<std::string>();
        mod.attachment = m.at("attachment").get<std::string>() == "pre-numeral" ? Attachment::kPreNumeral : Attachment::kPreVerb;
        mod.semantics = m.at("semantics").get<std::string>() == "preserving" ? Semantics::kPreserving : Semantics::kAltering;
        inst.meta.modifications.push_back(std::move(mod));
      }
      inst.answers = ReadAnswers(j.at("answers"), inst.passage.text, source, where);
      assembler.Add(j.at("pair_id").get<std::string>(), std::move(inst), where);
    } catch (const nlohmann::json::exception& e) {
      ParseFail(source, where, e.what());
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kParse) throw;
      ParseFail(source, where, e.what());
    }
  }
  if (!header) ParseFail(source, "", "empty file");
  return assembler.Finish();
}

ojson SquadParagraph(const Instance& inst) {
  auto answers = ojson::array();
  for (const auto& a : inst.answers) {
    if (inst.passage.text.compare(a.start, a.text.size(), a.text) != 0) {
      throw Error(ErrorKind::kConsistency, inst.instance_id + ": answer offset mismatch");
    }
    answers.push_back(ojson{{"text", a.text},
                            {"answer_start", ByteToScalarOffset(inst.passage.text, a.start)}});
  }
  ojson qa;
  qa["id"] = inst.instance_id;
  qa["question"] = inst.question_text;
  qa["answers"] = std::move(answers);
  ojson paragraph;
  paragraph["context"] = inst.passage.text;
  paragraph["qas"] = ojson::array({std::move(qa)});
  return paragraph;
}

std::string WriteSquad(std::span<const AlignedPair> pairs) {
  ojson root;
  root["version"] = "1.1";
  root["offset_unit"] = kOffsetUnit;
  auto data = ojson::array();
  for (const auto& pair : pairs) {
    ojson article;
    article["title"] = pair.pair_id;
    auto paragraphs = ojson::array();
    for (const Instance* inst : InstancesOf(pair)) paragraphs.push_back(SquadParagraph(*inst));
    article["paragraphs"] = std::move(paragraphs);
    data.push_back(std::move(article));
  }
  root["data"] = std::move(data);
  return root.dump() + "\n";
}

std::vector<AlignedPair> ReadSquad(std::string_view text, std::string_view source) {
  const ojson root = ParseJson(text, source);
  if (!root.is_object() || !root.contains("data") || !root["data"].is_array()) {
    ParseFail(source, "", "no \"data\" array");
  }
  if (root.value("offset_unit", std::string(kOffsetUnit)) != kOffsetUnit) {
    ParseFail(source, "", "unsupported offset_unit");
  }
  PairAssembler assembler(source);
  size_t article_no = 0;
  for (const auto& article : root["data"]) {
    const std::string where = "data[" + std::to_string(article_no++) + "]";
    try {
      const std::string pair_id = article.at("title").get<std::string>();
      for (const auto& paragraph : article.at("paragraphs")) {
        const std::string context = paragraph.at("context").get<std::string>();
        for (const auto& qa : paragraph.at("qas")) {
          Instance inst;
          inst.instance_id = qa.at("id").get<std::string>();
          inst.question_text = qa.at("question").get<std::string>();
          inst.passage.text = context;
          inst.meta.variant = VariantFromId(inst.instance_id, source);
          inst.answers = ReadAnswers(qa.at("answers"), context, source, where);
          assembler.Add(pair_id, std::move(inst), where);
        }
      }
    } catch (const nlohmann::json::exception& e) {
      ParseFail(source, where, e.what());
    }
  }
  return assembler.Finish();
}

std::vector<AlignedPair> ReadPairsFile(const std::string& path) {
  const std::string text = ReadTextFile(path);
  const size_t nl = text.find('\n');
  const std::string_view first = std::string_view(text).substr(0, nl);
  if (first.find(kJsonlFormat) != std::string_view::npos) return ReadAlignedJsonl(text, path);
  return ReadSquad(text, path);
}

PredictionSet ReadPredictions(std::string_view text, std::string_view source) {
  std::set<std::string> keys;
  nlohmann::json::parser_callback_t on_event = [&](int depth, nlohmann::json::parse_event_t event,
                                                   nlohmann::json& parsed) {
    if (event == nlohmann::json::parse_event_t::key && depth == 1) {
      const auto key = parsed.get<std::string>();
      if (!keys.insert(key).second) ParseFail(source, "", "duplicate prediction for '" + key + "'");
    }
    return true;
  };
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text.begin(), text.end(), on_event);
  } catch (const nlohmann::json::parse_error& e) {
    ParseFail(source, "byte " + std::to_string(e.byte), e.what());
  }
  if (!j.is_object()) ParseFail(source, "", "predictions must be a JSON object");
  PredictionSet preds;
  preds.provenance = std::string(source);
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_string()) ParseFail(source, "", "prediction for '" + it.key() + "' is not a string");
    preds.answers[it.key()] = it.value().get<std::string>();
  }
  return preds;
}

std::string WritePredictions(const PredictionSet& preds) {
  ojson j = ojson::object();
  for (const auto& [id, answer] : preds.answers) j[id] = answer;
  return j.dump(2) + "\n";
}

ojson ScoreReportJson(const ScoreReport& r, const CorrectnessRule& rule) {
  auto opt = [](const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); };
  ojson j;
  j["n_pairs"] = r.n_pairs;
  j["acc_baseline"] = r.acc_baseline;
  j["acc_intervention"] = r.acc_intervention;
  j["joint"] = r.joint;
  j["dice"] = opt(r.dice);
  j["em"] = r.em;
  j["f1"] = r.f1;
  j["ci_halfwidths"] = ojson{{"acc_baseline", r.ci_halfwidths.acc_baseline},
                             {"acc_intervention", r.ci_halfwidths.acc_intervention},
                             {"joint", r.ci_halfwidths.joint},
                             {"dice", opt(r.ci_halfwidths.dice)}};
  j["alpha"] = r.alpha;
  j["counts"] = ojson{{"baseline_correct", r.baseline_correct},
                      {"intervention_correct", r.intervention_correct},
                      {"joint", r.joint_correct}};
  j["display"] = ojson{
      {"acc_baseline", DisplayPercent(r.acc_baseline, r.ci_halfwidths.acc_baseline)},
      {"acc_intervention", DisplayPercent(r.acc_intervention, r.ci_halfwidths.acc_intervention)},
      {"joint", DisplayPercent(r.joint, r.ci_halfwidths.joint)},
      {"dice", r.dice ? ojson(DisplayPercent(*r.dice, *r.ci_halfwidths.dice)) : ojson(nullptr)}};
  j["correctness"] = ojson{
      {"rule", rule.kind == CorrectnessRule::Kind::kExactMatch ? "em" : "f1"},
      {"tau", rule.tau},
      {"max_answer_tokens", rule.max_answer_tokens}};
  j["missing"] = r.missing;
  j["provenance"] = r.provenance;
  return j;
}

ojson QualityReportJson(const QualityReport& r) {
  ojson j;
  j["m1_adjacent_sentence_similarity"] = r.m1_adjacent_sentence_similarity;
  j["m2_type_token_ratio"] = r.m2_type_token_ratio;
  j["m3_adjacent_verb_overlap"] = r.m3_adjacent_verb_overlap;
  j["m4_pronoun_noun_ratio"] = r.m4_pronoun_noun_ratio;
  j["lexical_diversity_jaccard"] = r.lexical_diversity_jaccard;
  j["passage_count"] = r.passage_count;
  j["jaccard_pairs"] = r.jaccard_pairs;
  j["jaccard_sampled"] = r.jaccard_sampled;
  j["notes"] = ojson{
      {"indices", "reconstructions of cohesion indices over lemma and POS annotations"},
      {"lexical_diversity", "mean pairwise Jaccard similarity of passage token types; lower is more diverse"},
      {"type_token_ratio", "per-passage ratio averaged over passages"}};
  return j;
}

std::string WriteCorpus(const AnnotatedCorpus& corpus) {
  ojson root;
  root["format"] = kCorpusFormat;
  root["version"] = 1;
  root["offset_unit"] = kOffsetUnit;
  auto passages = ojson::array();
  for (const auto& p : corpus.passages) {
    ojson jp;
    jp["text"] = p.text;
    auto sentences = ojson::array();
    for (const auto& s : p.sentences) sentences.push_back(RangeJson(s, p.text));
    jp["sentences"] = std::move(sentences);
    auto tokens = ojson::array();
    for (const auto& t : p.tokens) {
      tokens.push_back(ojson{{"range", RangeJson(t.range, p.text)}, {"pos", Name(t.pos)}, {"lemma", t.lemma}});
    }
    jp["tokens"] = std::move(tokens);
    passages.push_back(std::move(jp));
  }
  root["passages"] = std::move(passages);
  return root.dump() + "\n";
}

AnnotatedCorpus ReadCorpus(std::string_view text, std::string_view source) {
  const ojson root = ParseJson(text, source);
  if (!root.is_object() || root.value("format", "") != kCorpusFormat) ParseFail(source, "", "not a samforge corpus file");
  if (root.value("offset_unit", "") != kOffsetUnit) ParseFail(source, "", "unsupported offset_unit");
  AnnotatedCorpus corpus;
  size_t index = 0;
  for (const auto& jp : root.at("passages")) {
    const std::string where = "passages[" + std::to_string(index++) + "]";
    try {
      CorpusPassage p;
      p.text = jp.at("text").get<std::string>();
      for (const auto& s : jp.at("sentences")) p.sentences.push_back(RangeFrom(s, p.text, source, where));
      for (const auto& t : jp.at("tokens")) {
        CorpusToken tok;
        tok.range = RangeFrom(t.at("range"), p.text, source, where);
        tok.pos = ParsePos(t.at("pos").get<std::string>());
        tok.lemma = t.at("lemma").get<std::string>();
        p.tokens.push_back(std::move(tok));
      }
      corpus.passages.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      ParseFail(source, where, e.what());
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kParse) throw;
      ParseFail(source, where, e.what());
    }
  }
  return corpus;
}

ojson WorldJson(const MatchWorld& world) {
  ojson j;
  j["match_id"] = world.match_id;
  j["teams"] = ojson::array({world.teams[0], world.teams[1]});
  auto players = ojson::array();
  for (const auto& p : world.players) {
    players.push_back(ojson{{"name", p.name}, {"team", p.team}, {"pronoun", p.pronoun == Pronoun::kShe ? "she" : "he"}});
  }
  j["players"] = std::move(players);
  auto events = ojson::array();
  for (const auto& e : world.events) {
    auto mods = ojson::array();
    for (const auto& m : e.applied_modifications) mods.push_back(ojson{{"category", Name(m.category)}, {"lexeme", m.lexeme}});
    events.push_back(ojson{{"id", e.id.value},
                           {"kind", Name(e.kind)},
                           {"agent", world.players[static_cast<size_t>(e.agent)].name},
                           {"quantity", e.quantity.value},
                           {"unit", e.quantity.unit},
                           {"minute", e.minute},
                           {"polarity", e.polarity},
                           {"modifications", std::move(mods)}});
  }
  j["events"] = std::move(events);
  return j;
}

ojson ParseJson(std::string_view text, std::string_view source) {
  try {
    return ojson::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    ParseFail(source, "byte " + std::to_string(e.byte), e.what());
  }
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteTextFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path);
}

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr);
  static const char* kHex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

}  // namespace samforge
