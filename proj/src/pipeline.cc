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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "samforge/errors.h"
#include "samforge/formats.h"
#include "samforge/rng.h"

namespace samforge {

void ValidateGenerationConfig(const GenerationConfig& config) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::kConfiguration, msg); };
  if (config.categories.empty()) fail("no SAM categories enabled");
  if (config.qtypes.empty()) fail("no question types enabled");
  if (config.num_sam_weights.empty()) fail("empty num_sam distribution");
  double total = 0;
  for (const auto& [k, w] : config.num_sam_weights) {
    if (w < 0) fail("negative num_sam weight");
    if (w > 0 && (k < 1 || k >= config.pair.world.max_events)) {
      fail("num_sam " + std::to_string(k) + " needs between 1 and max_events - 1");
    }
    total += w;
  }
  if (total <= 0) fail("num_sam weights are all zero");
  ValidateConfig(config.pair.world);
}

uint64_t PairSeed(uint64_t master_seed, size_t index) { return DeriveSeed(master_seed, index); }

std::string PairId(size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "p%06zu", index);
  return buf;
}

AlignedPair GeneratePair(const GenerationConfig& config, size_t index, const Grammar& grammar) {
  const uint64_t seed = PairSeed(config.master_seed, index);
  Rng choices(DeriveSeed(seed, ~uint64_t{0}));
  const QuestionType qtype = choices.Pick(config.qtypes);
  std::vector<int> values;
  std::vector<double> weights;
  for (const auto& [k, w] : config.num_sam_weights) {
    values.push_back(k);
    weights.push_back(w);
  }
  const int num_sam = values[choices.Weighted(weights)];
  PairConfig pair_config = config.pair;
  pair_config.spm_enabled = config.spm_enabled;
  return BuildAlignedPair(pair_config, qtype, num_sam, config.categories, config.partition, seed,
                          grammar, PairId(index));
}

std::vector<AlignedPair> GenerateChallengeSet(const GenerationConfig& config,
                                              const Grammar& grammar) {
  ValidateGenerationConfig(config);
  const size_t n = config.n_pairs;
  std::vector<std::optional<AlignedPair>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < n; i = next++) {
      try {
        slots[i] = GeneratePair(config, i, grammar);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<size_t>(threads, std::max<size_t>(n, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  std::vector<AlignedPair> pairs;
  pairs.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    pairs.push_back(std::move(*slots[i]));
  }
  return pairs;
}

std::string_view Name(SplitAxis axis) {
  switch (axis) {
    case SplitAxis::kQtype: return "qtype";
    case SplitAxis::kSamCategory: return "sam";
    case SplitAxis::kNumSam: return "num-sam";
  }
  return "?";
}

SplitAxis ParseSplitAxis(std::string_view name) {
  if (name == "qtype") return SplitAxis::kQtype;
  if (name == "sam") return SplitAxis::kSamCategory;
  if (name == "num-sam") return SplitAxis::kNumSam;
  throw Error(ErrorKind::kConfiguration, "unknown split axis '" + std::string(name) + "'");
}

SplitPolicy MakeSplitPolicy(SplitAxis axis, std::set<std::string> train_side,
                            std::set<std::string> eval_side) {
  if (train_side.empty()) throw Error(ErrorKind::kSplit, "train side is empty");
  if (eval_side.empty()) throw Error(ErrorKind::kSplit, "eval side is empty");
  for (const auto& v : train_side) {
    if (eval_side.contains(v)) throw Error(ErrorKind::kSplit, "value '" + v + "' on both sides");
  }
  return SplitPolicy{axis, std::move(train_side), std::move(eval_side)};
}

SplitPolicy RandomQtypeSplit(const std::vector<QuestionType>& qtypes, uint64_t seed) {
  std::vector<std::string> names;
  for (QuestionType q : qtypes) names.emplace_back(Name(q));
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  Rng rng(seed);
  rng.Shuffle(names);
  const size_t half = names.size() / 2;
  return MakeSplitPolicy(SplitAxis::kQtype, {names.begin(), names.begin() + half},
                         {names.begin() + half, names.end()});
}

std::set<std::string> AxisValues(const AlignedPair& pair, SplitAxis axis) {
  const InstanceMeta& meta = pair.intervention.meta;
  switch (axis) {
    case SplitAxis::kQtype:
      return {std::string(Name(meta.qtype))};
    case SplitAxis::kSamCategory: {
      std::set<std::string> out;
      for (SamCategory c : meta.sam_categories) out.emplace(Name(c));
      return out;
    }
    case SplitAxis::kNumSam:
      return {std::to_string(meta.num_sam)};
  }
  return {};
}

HoldoutSplit MakeHoldoutSplit(std::span<const AlignedPair> pairs, const SplitPolicy& policy) {
  HoldoutSplit split;
  auto within = [](const std::set<std::string>& values, const std::set<std::string>& side) {
    return !values.empty() && std::includes(side.begin(), side.end(), values.begin(), values.end());
  };
  for (const auto& pair : pairs) {
    const auto values = AxisValues(pair, policy.axis);
    if (within(values, policy.train_side)) {
      split.augmentation.push_back(pair);
    } else if (within(values, policy.eval_side)) {
      split.evaluation.push_back(pair);
    } else {
      ++split.dropped;
    }
  }
  if (split.augmentation.empty()) throw Error(ErrorKind::kSplit, "augmentation side is empty");
  if (split.evaluation.empty()) throw Error(ErrorKind::kSplit, "evaluation side is empty");
  return split;
}

MixResult MixAugmentation(const nlohmann::ordered_json& base, std::span<const AlignedPair> pairs,
                          size_t take, double baseline_fraction, double intervention_fraction,
                          uint64_t seed) {
  if (!base.is_object() || !base.contains("data") || !base["data"].is_array()) {
    throw Error(ErrorKind::kParse, "base training file has no \"data\" array");
  }
  if (baseline_fraction < 0 || intervention_fraction < 0 ||
      std::abs(baseline_fraction + intervention_fraction - 1.0) > 1e-9) {
    throw Error(ErrorKind::kConfiguration, "variant fractions must be nonnegative and sum to 1");
  }
  if (take > pairs.size()) {
    throw Error(ErrorKind::kConfiguration, "take " + std::to_string(take) + " exceeds the " +
                                               std::to_string(pairs.size()) + " available pairs");
  }
  const auto n_baseline = static_cast<size_t>(std::llround(static_cast<double>(take) * baseline_fraction));

  Rng rng(seed);
  std::vector<size_t> order(pairs.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.Shuffle(order);
  order.resize(take);

  const auto& original = base["data"];
  const size_t total = original.size() + take;
  // Selection k goes to positions[k]; the baseline/intervention choice
  // follows selection order, so neither variant clusters in the file.
  const auto positions = rng.SampleDistinct(0, static_cast<int64_t>(total) - 1, take);
  std::vector<std::pair<size_t, size_t>> placed;  // (position, selection index)
  for (size_t k = 0; k < take; ++k) placed.emplace_back(static_cast<size_t>(positions[k]), k);
  std::sort(placed.begin(), placed.end());

  MixResult result;
  result.merged = base;
  auto& data = result.merged["data"];
  data = nlohmann::ordered_json::array();
  size_t next_original = 0, next_new = 0;
  for (size_t slot = 0; slot < total; ++slot) {
    if (next_new < take && placed[next_new].first == slot) {
      const size_t k = placed[next_new].second;
      const AlignedPair& pair = pairs[order[k]];
      const Instance& inst = k < n_baseline ? pair.baseline : pair.intervention;
      nlohmann::ordered_json article;
      article["title"] = "samforge-" + inst.instance_id;
      article["paragraphs"] = nlohmann::ordered_json::array({SquadParagraph(inst)});
      data.push_back(std::move(article));
      result.manifest.push_back(MixEntry{pair.pair_id, inst.meta.variant, inst.instance_id, slot});
      ++next_new;
    } else {
      data.push_back(original[next_original++]);
    }
  }
  return result;
}

}  // namespace samforge
