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

#include "samforge/pipeline.h"

#include <gtest/gtest.h>

#include <algorithm>

#include "samforge/errors.h"
#include "samforge/formats.h"
#include "samforge/rng.h"

namespace samforge {
namespace {

using ojson = nlohmann::ordered_json;

GenerationConfig Config(size_t n, uint64_t seed = 1) {
  GenerationConfig c;
  c.n_pairs = n;
  c.master_seed = seed;
  return c;
}

ErrorKind KindOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::kIo;
}

ojson Base(size_t articles) {
  ojson base{{"version", "1.1"}, {"data", ojson::array()}};
  for (size_t i = 0; i < articles; ++i) {
    base["data"].push_back(ojson{{"title", "orig-" + std::to_string(i)}, {"paragraphs", ojson::array()}});
  }
  return base;
}

TEST(GenerateChallengeSet, AllPairsValid) {
  const auto pairs = GenerateChallengeSet(Config(600));
  ASSERT_EQ(pairs.size(), 600u);
  std::set<QuestionType> qtypes;
  std::set<int> num_sams;
  for (size_t i = 0; i < pairs.size(); ++i) {
    ASSERT_NO_THROW(ValidatePair(pairs[i])) << i;
    EXPECT_EQ(pairs[i].pair_id, PairId(i));
    qtypes.insert(pairs[i].intervention.meta.qtype);
    num_sams.insert(pairs[i].intervention.meta.num_sam);
  }
  EXPECT_EQ(qtypes.size(), 6u);
  EXPECT_EQ(num_sams, (std::set<int>{1, 2, 3}));
}

TEST(GenerateChallengeSet, SerializationIsByteIdentical) {
  EXPECT_EQ(WriteAlignedJsonl(GenerateChallengeSet(Config(10))), WriteAlignedJsonl(GenerateChallengeSet(Config(10))));
}

TEST(GenerateChallengeSet, ThreadCountDoesNotMatter) {
  GenerationConfig one = Config(200);
  one.threads = 1;
  GenerationConfig many = Config(200);
  many.threads = 7;
  EXPECT_EQ(GenerateChallengeSet(one), GenerateChallengeSet(many));
}

TEST(GenerateChallengeSet, ExtendingPreservesPrefix) {
  const auto shorter = GenerateChallengeSet(Config(50));
  const auto longer = GenerateChallengeSet(Config(80));
  ASSERT_EQ(longer.size(), 80u);
  for (size_t i = 0; i < shorter.size(); ++i) ASSERT_EQ(shorter[i], longer[i]) << i;
}

TEST(GenerateChallengeSet, DistinctSeedsGiveDistinctPassageMultisets) {
  std::vector<std::multiset<std::string>> sets;
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    std::multiset<std::string> passages;
    for (const auto& p : GenerateChallengeSet(Config(100, seed))) passages.insert(p.baseline.passage.text);
    sets.push_back(std::move(passages));
  }
  for (size_t a = 0; a < sets.size(); ++a) {
    for (size_t b = a + 1; b < sets.size(); ++b) EXPECT_NE(sets[a], sets[b]) << a << " " << b;
  }
}

TEST(GenerateChallengeSet, HonoursNumSamAndCategoryRestrictions) {
  GenerationConfig c = Config(150);
  c.num_sam_weights = {{2, 1.0}, {3, 1.0}};
  c.categories = {SamCategory::kModalIntent};
  c.qtypes = {QuestionType::kLastScorer};
  c.spm_enabled = false;
  for (const auto& p : GenerateChallengeSet(c)) {
    EXPECT_GE(p.intervention.meta.num_sam, 2);
    EXPECT_EQ(p.intervention.meta.qtype, QuestionType::kLastScorer);
    for (SamCategory cat : p.intervention.meta.sam_categories) EXPECT_EQ(cat, SamCategory::kModalIntent);
    EXPECT_FALSE(p.spm);
  }
}

TEST(GenerateChallengeSet, AugmentationPartitionUsesOnlyItsTemplates) {
  GenerationConfig c = Config(100);
  c.partition = Partition::kAugmentation;
  for (const auto& p : GenerateChallengeSet(c)) {
    for (const auto& id : p.intervention.meta.template_ids) {
      EXPECT_EQ(DefaultGrammar().ById(id).partition, Partition::kAugmentation);
    }
  }
}

TEST(ValidateGenerationConfig, RejectsBadConfigs) {
  GenerationConfig c = Config(10);
  c.num_sam_weights = {{1, 0.0}};
  EXPECT_EQ(KindOf([&] { ValidateGenerationConfig(c); }), ErrorKind::kConfiguration);
  c = Config(10);
  c.num_sam_weights = {{9, 1.0}};
  EXPECT_EQ(KindOf([&] { ValidateGenerationConfig(c); }), ErrorKind::kConfiguration);
  c = Config(10);
  c.categories.clear();
  EXPECT_EQ(KindOf([&] { ValidateGenerationConfig(c); }), ErrorKind::kConfiguration);
  c = Config(10);
  c.qtypes.clear();
  EXPECT_EQ(KindOf([&] { GenerateChallengeSet(c); }), ErrorKind::kConfiguration);
}

TEST(PairSeed, IsStableMixOfMasterAndIndex) {
  EXPECT_EQ(PairSeed(1, 0), DeriveSeed(1, 0));
  EXPECT_EQ(PairId(42), "p000042");
}

class SplitTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { pairs_ = new std::vector<AlignedPair>(GenerateChallengeSet(Config(400))); }
  static void TearDownTestSuite() { delete pairs_; }
  static std::vector<AlignedPair>* pairs_;
};
std::vector<AlignedPair>* SplitTest::pairs_ = nullptr;

TEST_F(SplitTest, NumSamOneForAugmentationTwoThreeForEvaluation) {
  const auto split = MakeHoldoutSplit(*pairs_, MakeSplitPolicy(SplitAxis::kNumSam, {"1"}, {"2", "3"}));
  for (const auto& p : split.augmentation) EXPECT_EQ(p.intervention.meta.num_sam, 1);
  for (const auto& p : split.evaluation) EXPECT_GE(p.intervention.meta.num_sam, 2);
  EXPECT_EQ(split.augmentation.size() + split.evaluation.size() + split.dropped, pairs_->size());
  EXPECT_EQ(split.dropped, 0u);
}

TEST_F(SplitTest, HeldOutCategoryNeverInAugmentation) {
  const auto policy = MakeSplitPolicy(SplitAxis::kSamCategory, {"explicit-negation", "implicit-negation-verb", "modal-intent"},
                                      {"adverbial-modifier"});
  const auto split = MakeHoldoutSplit(*pairs_, policy);
  for (const auto& p : split.augmentation) {
    for (const auto& v : AxisValues(p, SplitAxis::kSamCategory)) EXPECT_FALSE(policy.eval_side.contains(v));
    for (const auto& m : p.intervention.meta.modifications) {
      EXPECT_NE(m.category, SamCategory::kAdverbialModifier);
      EXPECT_NE(m.lexeme, "almost");
    }
  }
  for (const auto& p : split.evaluation) {
    for (const auto& v : AxisValues(p, SplitAxis::kSamCategory)) EXPECT_TRUE(policy.eval_side.contains(v));
  }
  EXPECT_GT(split.dropped, 0u);  // mixed-category interventions sit on neither side
}

TEST_F(SplitTest, QtypeSplitIsDisjoint) {
  const auto policy = RandomQtypeSplit({std::begin(kAllQuestionTypes), std::end(kAllQuestionTypes)}, 3);
  EXPECT_EQ(policy.train_side.size(), 3u);
  EXPECT_EQ(policy.eval_side.size(), 3u);
  EXPECT_EQ(policy.train_side, RandomQtypeSplit({std::begin(kAllQuestionTypes), std::end(kAllQuestionTypes)}, 3).train_side);
  const auto split = MakeHoldoutSplit(*pairs_, policy);
  std::set<std::string> train_seen, eval_seen;
  for (const auto& p : split.augmentation) train_seen.emplace(Name(p.intervention.meta.qtype));
  for (const auto& p : split.evaluation) eval_seen.emplace(Name(p.intervention.meta.qtype));
  for (const auto& q : train_seen) EXPECT_FALSE(eval_seen.contains(q));
}

TEST_F(SplitTest, PolicyErrors) {
  EXPECT_EQ(KindOf([] { MakeSplitPolicy(SplitAxis::kNumSam, {"1", "2"}, {"2", "3"}); }), ErrorKind::kSplit);
  EXPECT_EQ(KindOf([] { MakeSplitPolicy(SplitAxis::kNumSam, {}, {"2"}); }), ErrorKind::kSplit);
  EXPECT_EQ(KindOf([&] { MakeHoldoutSplit(*pairs_, MakeSplitPolicy(SplitAxis::kNumSam, {"1"}, {"7"})); }),
            ErrorKind::kSplit);
  EXPECT_EQ(KindOf([] { ParseSplitAxis("colour"); }), ErrorKind::kConfiguration);
}

TEST_F(SplitTest, MixInterventionOnly) {
  const ojson base = Base(25);
  const MixResult r = MixAugmentation(base, *pairs_, 300, 0.0, 1.0, 9);
  ASSERT_EQ(r.merged["data"].size(), 325u);
  ASSERT_EQ(r.manifest.size(), 300u);
  std::set<std::string> pair_ids;
  for (const auto& e : r.manifest) {
    EXPECT_EQ(e.variant, Variant::kIntervention);
    EXPECT_EQ(r.merged["data"][e.position]["title"], "samforge-" + e.instance_id);
    EXPECT_TRUE(pair_ids.insert(e.pair_id).second);
  }
}

TEST_F(SplitTest, MixHalfAndHalfKeepsOriginalOrder) {
  const ojson base = Base(40);
  const MixResult r = MixAugmentation(base, *pairs_, 300, 0.5, 0.5, 9);
  size_t baselines = 0;
  for (const auto& e : r.manifest) baselines += e.variant == Variant::kBaseline;
  EXPECT_EQ(baselines, 150u);
  std::vector<std::string> originals;
  for (const auto& a : r.merged["data"]) {
    const auto title = a["title"].get<std::string>();
    if (title.starts_with("orig-")) originals.push_back(title);
  }
  ASSERT_EQ(originals.size(), 40u);
  for (size_t i = 0; i < originals.size(); ++i) EXPECT_EQ(originals[i], "orig-" + std::to_string(i));
  // Inserted paragraphs carry the instance and a verifiable offset.
  const auto& e = r.manifest.front();
  const auto& para = r.merged["data"][e.position]["paragraphs"][0];
  const std::string context = para["context"];
  const auto& answer = para["qas"][0]["answers"][0];
  EXPECT_EQ(context.substr(ScalarToByteOffset(context, answer["answer_start"]), answer["text"].get<std::string>().size()),
            answer["text"]);
  EXPECT_EQ(MixAugmentation(base, *pairs_, 300, 0.5, 0.5, 9).merged, r.merged);
}

TEST_F(SplitTest, MixTakeZeroIsIdentity) {
  const ojson base = Base(12);
  const MixResult r = MixAugmentation(base, *pairs_, 0, 0.5, 0.5, 1);
  EXPECT_EQ(r.merged, base);
  EXPECT_TRUE(r.manifest.empty());
}

TEST_F(SplitTest, MixErrors) {
  EXPECT_EQ(KindOf([&] { MixAugmentation(ojson{{"version", "1.1"}}, *pairs_, 1, 1, 0, 1); }), ErrorKind::kParse);
  EXPECT_EQ(KindOf([&] { MixAugmentation(Base(1), *pairs_, 1, 0.7, 0.7, 1); }), ErrorKind::kConfiguration);
  EXPECT_EQ(KindOf([&] { MixAugmentation(Base(1), *pairs_, pairs_->size() + 1, 1, 0, 1); }), ErrorKind::kConfiguration);
}

}  // namespace
}  // namespace samforge
