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

#ifndef SAMFORGE_PIPELINE_H_
#define SAMFORGE_PIPELINE_H_

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "samforge/grammar.h"
#include "samforge/modifier.h"

namespace samforge {

struct GenerationConfig {
  uint64_t master_seed = 1;
  size_t n_pairs = 4200;
  std::map<int, double> num_sam_weights{{1, 1.0}, {2, 1.0}, {3, 1.0}};
  std::vector<SamCategory> categories{std::begin(kAllSamCategories), std::end(kAllSamCategories)};
  std::vector<QuestionType> qtypes{std::begin(kAllQuestionTypes), std::end(kAllQuestionTypes)};
  Partition partition = Partition::kChallenge;
  bool spm_enabled = true;
  PairConfig pair;        // pair.spm_enabled is overridden by spm_enabled
  unsigned threads = 0;   // 0: hardware concurrency
};

// Throws kConfiguration for negative or all-zero weights, empty category or
// qtype sets, or num_sam values the world config cannot host.
void ValidateGenerationConfig(const GenerationConfig& config);

// Seed of pair `index`: DeriveSeed(master_seed, index). The pair's qtype and
// num_sam are drawn from a stream of that seed, so pair i never depends on
// any other pair.
uint64_t PairSeed(uint64_t master_seed, size_t index);
std::string PairId(size_t index);

AlignedPair GeneratePair(const GenerationConfig& config, size_t index, const Grammar& grammar);

// Exactly n_pairs pairs; identical for any thread count. Rethrows the error
// of the lowest failing index.
std::vector<AlignedPair> GenerateChallengeSet(const GenerationConfig& config,
                                              const Grammar& grammar = DefaultGrammar());

enum class SplitAxis { kQtype, kSamCategory, kNumSam };

std::string_view Name(SplitAxis axis);
SplitAxis ParseSplitAxis(std::string_view name);

struct SplitPolicy {
  SplitAxis axis = SplitAxis::kQtype;
  std::set<std::string> train_side;
  std::set<std::string> eval_side;
};

// Throws kSplit when a side is empty or the sides overlap.
SplitPolicy MakeSplitPolicy(SplitAxis axis, std::set<std::string> train_side,
                            std::set<std::string> eval_side);

// Question types shuffled by `seed` and cut in half (train gets the first
// half, rounded down).
SplitPolicy RandomQtypeSplit(const std::vector<QuestionType>& qtypes, uint64_t seed);

// Values a pair takes on the axis: its qtype, the set of SAM categories in
// its intervention, or its num_sam.
std::set<std::string> AxisValues(const AlignedPair& pair, SplitAxis axis);

struct HoldoutSplit {
  std::vector<AlignedPair> augmentation;
  std::vector<AlignedPair> evaluation;
  size_t dropped = 0;  // pairs whose values fall on neither side
};

// A pair joins a side only if all of its axis values lie in that side.
// Throws kSplit naming an empty side.
HoldoutSplit MakeHoldoutSplit(std::span<const AlignedPair> pairs, const SplitPolicy& policy);

struct MixEntry {
  std::string pair_id;
  Variant variant = Variant::kBaseline;
  std::string instance_id;
  size_t position = 0;  // index in the merged "data" array
};

struct MixResult {
  nlohmann::ordered_json merged;
  std::vector<MixEntry> manifest;
};

// Adds `take` challenge-set instances to a SQuAD-v1 training file: distinct
// pairs sampled without replacement, round(take * baseline_fraction) of them
// contributing their baseline and the rest their intervention, each as its
// own article at a seeded position. Original articles keep their order and
// content. Throws kConfiguration when take exceeds the pairs or fractions do
// not sum to 1, kParse when `base` lacks a "data" array.
MixResult MixAugmentation(const nlohmann::ordered_json& base, std::span<const AlignedPair> pairs,
                          size_t take, double baseline_fraction, double intervention_fraction,
                          uint64_t seed);

}  // namespace samforge

#endif  // SAMFORGE_PIPELINE_H_
