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

#include <gtest/gtest.h>

#include <filesystem>

#include "samforge/errors.h"
#include "samforge/pipeline.h"

namespace samforge {
namespace {

using ojson = nlohmann::ordered_json;

ErrorKind KindOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::kIo;
}

std::string MessageOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

std::vector<AlignedPair> Pairs(size_t n, bool accented = false) {
  GenerationConfig c;
  c.n_pairs = n;
  if (accented) {
    c.pair.world.player_names = {"Müller", "Ødegaard", "Núñez", "Smith", "Jones", "Brown", "Żurek", "Çelik"};
    c.pair.world.team_names = {"Lüneburg", "Patriots", "Texans", "Málaga"};
  }
  return GenerateChallengeSet(c);
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start < text.size()) {
    const size_t nl = text.find('\n', start);
    out.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

TEST(Offsets, ByteScalarConversion) {
  const std::string s = "Müller kicked 25 yards";  // ü is two bytes
  EXPECT_EQ(ByteToScalarOffset(s, 0), 0u);
  EXPECT_EQ(ByteToScalarOffset(s, 3), 2u);
  EXPECT_EQ(ByteToScalarOffset(s, s.find("kicked")), 7u);
  EXPECT_EQ(ScalarToByteOffset(s, 7), s.find("kicked"));
  EXPECT_EQ(ScalarToByteOffset(s, 22), s.size());
  EXPECT_THROW(ScalarToByteOffset(s, 23), Error);
  for (size_t b = 0; b <= s.size(); ++b) {
    if (b < s.size() && (static_cast<unsigned char>(s[b]) & 0xC0) == 0x80) continue;
    EXPECT_EQ(ScalarToByteOffset(s, ByteToScalarOffset(s, b)), b);
  }
}

TEST(AlignedJsonl, RecordsPerPairAndHeader) {
  const auto pairs = Pairs(40);
  const std::string text = WriteAlignedJsonl(pairs);
  const auto lines = Lines(text);
  const ojson header = ojson::parse(lines[0]);
  EXPECT_EQ(header["format"], "samforge-aligned-jsonl");
  EXPECT_EQ(header["offset_unit"], "unicode-scalar");
  size_t expected = 1;
  for (const auto& p : pairs) expected += p.spm ? 3 : 2;
  EXPECT_EQ(lines.size(), expected);
  const ojson first = ojson::parse(lines[1]);
  const ojson second = ojson::parse(lines[2]);
  EXPECT_EQ(first["pair_id"], second["pair_id"]);
  EXPECT_EQ(first["instance_id"], first["pair_id"].get<std::string>() + "-baseline");
  EXPECT_EQ(second["variant"], "intervention");
  const std::vector<std::string> keys{"pair_id", "instance_id", "variant", "qtype", "sam_categories", "num_sam",
                                      "question", "passage", "answers", "template_ids", "partition", "modifications"};
  std::vector<std::string> got;
  for (auto it = second.begin(); it != second.end(); ++it) got.push_back(it.key());
  EXPECT_EQ(got, keys);
}

TEST(AlignedJsonl, RoundTripIsByteIdentical) {
  for (bool accented : {false, true}) {
    const auto pairs = Pairs(60, accented);
    const std::string once = WriteAlignedJsonl(pairs);
    const auto back = ReadAlignedJsonl(once, "mem");
    ASSERT_EQ(back.size(), pairs.size());
    EXPECT_EQ(WriteAlignedJsonl(back), once);
    for (size_t i = 0; i < pairs.size(); ++i) {
      EXPECT_EQ(back[i].intervention.answers, pairs[i].intervention.answers);
      EXPECT_EQ(back[i].intervention.meta.modifications, pairs[i].intervention.meta.modifications);
      EXPECT_EQ(back[i].spm.has_value(), pairs[i].spm.has_value());
    }
  }
}

TEST(Squad, OffsetsVerifiedBySlicingScalars) {
  const auto pairs = Pairs(50, true);
  const ojson root = ojson::parse(WriteSquad(pairs));
  EXPECT_EQ(root["version"], "1.1");
  size_t instances = 0;
  bool saw_multibyte = false;
  for (const auto& article : root["data"]) {
    for (const auto& para : article["paragraphs"]) {
      const std::string context = para["context"];
      // Slice by code points, independent of the library conversion.
      std::vector<std::string> chars;
      for (size_t i = 0; i < context.size();) {
        size_t len = 1;
        const auto c = static_cast<unsigned char>(context[i]);
        if (c >= 0xF0) len = 4; else if (c >= 0xE0) len = 3; else if (c >= 0xC0) len = 2;
        chars.push_back(context.substr(i, len));
        i += len;
      }
      saw_multibyte |= chars.size() != context.size();
      for (const auto& qa : para["qas"]) {
        ++instances;
        for (const auto& a : qa["answers"]) {
          const std::string text = a["text"];
          std::string sliced;
          size_t k = a["answer_start"];
          while (sliced.size() < text.size() && k < chars.size()) sliced += chars[k++];
          EXPECT_EQ(sliced, text);
        }
      }
    }
  }
  EXPECT_GE(instances, 100u);
  EXPECT_TRUE(saw_multibyte);
}

TEST(Squad, RoundTripThroughReader) {
  const auto pairs = Pairs(30, true);
  const std::string squad = WriteSquad(pairs);
  const auto back = ReadSquad(squad, "mem");
  EXPECT_EQ(WriteSquad(back), squad);
  ASSERT_EQ(back.size(), pairs.size());
  EXPECT_EQ(back[3].intervention.answers, pairs[3].intervention.answers);
}

TEST(ReadPairsFile, DetectsFormat) {
  const auto dir = std::filesystem::temp_directory_path() / "samforge_formats_test";
  std::filesystem::create_directories(dir);
  const auto pairs = Pairs(5);
  WriteTextFile((dir / "a.jsonl").string(), WriteAlignedJsonl(pairs));
  WriteTextFile((dir / "a.json").string(), WriteSquad(pairs));
  EXPECT_EQ(ReadPairsFile((dir / "a.jsonl").string()).size(), 5u);
  EXPECT_EQ(ReadPairsFile((dir / "a.json").string()).size(), 5u);
  EXPECT_EQ(KindOf([&] { ReadPairsFile((dir / "missing.jsonl").string()); }), ErrorKind::kIo);
}

TEST(AlignedJsonl, ParseErrorsNameTheLine) {
  const auto lines = Lines(WriteAlignedJsonl(Pairs(2)));
  auto join = [](const std::vector<std::string>& ls) {
    std::string s;
    for (const auto& l : ls) s += l + "\n";
    return s;
  };
  EXPECT_EQ(KindOf([&] { ReadAlignedJsonl(join({lines.begin() + 1, lines.end()}), "x"); }), ErrorKind::kParse);

  auto broken = lines;
  broken[2] = "{not json";
  EXPECT_NE(MessageOf([&] { ReadAlignedJsonl(join(broken), "f.jsonl"); }).find("f.jsonl:line 3"), std::string::npos);

  broken = lines;
  ojson rec = ojson::parse(broken[2]);
  rec["answers"][0]["answer_start"] = rec["answers"][0]["answer_start"].get<int>() + 1;
  broken[2] = rec.dump();
  EXPECT_EQ(KindOf([&] { ReadAlignedJsonl(join(broken), "x"); }), ErrorKind::kParse);

  broken = lines;
  broken[2] = broken[1];  // duplicate baseline
  EXPECT_EQ(KindOf([&] { ReadAlignedJsonl(join(broken), "x"); }), ErrorKind::kParse);

  broken = {lines[0], lines[1]};  // no intervention
  EXPECT_EQ(KindOf([&] { ReadAlignedJsonl(join(broken), "x"); }), ErrorKind::kParse);
}

TEST(Export, RejectsInconsistentOffsets) {
  auto pairs = Pairs(1);
  pairs[0].baseline.answers[0].start += 1;
  EXPECT_EQ(KindOf([&] { WriteAlignedJsonl(pairs); }), ErrorKind::kConsistency);
  EXPECT_EQ(KindOf([&] { WriteSquad(pairs); }), ErrorKind::kConsistency);
}

TEST(Predictions, RoundTripAndValidation) {
  PredictionSet p;
  p.answers = {{"p000000-baseline", "Smith"}, {"p000000-intervention", "25 yards"}};
  const PredictionSet back = ReadPredictions(WritePredictions(p), "preds.json");
  EXPECT_EQ(back.answers, p.answers);
  EXPECT_EQ(back.provenance, "preds.json");
  EXPECT_EQ(KindOf([] { ReadPredictions(R"({"a": "x", "a": "y"})", "d"); }), ErrorKind::kParse);
  EXPECT_EQ(KindOf([] { ReadPredictions(R"({"a": 3})", "d"); }), ErrorKind::kParse);
  EXPECT_EQ(KindOf([] { ReadPredictions(R"(["a"])", "d"); }), ErrorKind::kParse);
  EXPECT_EQ(KindOf([] { ReadPredictions(R"({"a": )", "d"); }), ErrorKind::kParse);
  // Nested objects may reuse keys; only top-level ids must be unique.
  EXPECT_EQ(KindOf([] { ReadPredictions(R"({"a": "x", "b": {"a": 1}})", "d"); }), ErrorKind::kParse);
}

TEST(Corpus, RoundTripPreservesEverything) {
  AnnotatedCorpus corpus;
  for (const auto& p : Pairs(20, true)) corpus.passages.push_back(ToCorpusPassage(p.baseline.passage));
  const std::string text = WriteCorpus(corpus);
  const AnnotatedCorpus back = ReadCorpus(text, "c.json");
  EXPECT_EQ(back, corpus);
  EXPECT_EQ(WriteCorpus(back), text);
  EXPECT_EQ(KindOf([] { ReadCorpus(R"({"format":"other"})", "c"); }), ErrorKind::kParse);
}

TEST(Reports, ScoreReportJsonFields) {
  ScoreReport r;
  r.n_pairs = 4200;
  r.acc_baseline = 0.92;
  r.ci_halfwidths.acc_baseline = 0.0082;
  r.missing = {"p1-baseline"};
  const ojson j = ScoreReportJson(r, CorrectnessRule{});
  EXPECT_TRUE(j["dice"].is_null());
  EXPECT_TRUE(j["ci_halfwidths"]["dice"].is_null());
  EXPECT_EQ(j["display"]["acc_baseline"], "92 ± 1");
  EXPECT_EQ(j["missing"][0], "p1-baseline");
  EXPECT_EQ(j["correctness"]["rule"], "em");
  const ojson q = QualityReportJson(QualityReport{});
  EXPECT_TRUE(q.contains("lexical_diversity_jaccard"));
  EXPECT_TRUE(q.contains("notes"));
}

TEST(Sha256Hex, KnownDigests) {
  EXPECT_EQ(Sha256Hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(Sha256Hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(ParseJson, ReportsParseError) {
  EXPECT_EQ(KindOf([] { ParseJson("{", "x"); }), ErrorKind::kParse);
}

}  // namespace
}  // namespace samforge
