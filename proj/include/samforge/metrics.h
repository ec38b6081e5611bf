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

#ifndef SAMFORGE_METRICS_H_
#define SAMFORGE_METRICS_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "samforge/modifier.h"

namespace samforge {

// Extractive-QA answer normalization: lowercase, drop ASCII punctuation,
// drop the articles a/an/the as whole tokens, collapse whitespace.
std::string NormalizeAnswer(std::string_view s);

// 1 iff normalize(pred) equals normalize(g) for some gold. Requires golds
// to be non-empty.
int ExactMatch(std::string_view pred, std::span<const std::string> golds);

// Max over golds of token-level F1 on normalized token multisets. Both
// sides empty scores 1, exactly one side empty scores 0.
double TokenF1(std::string_view pred, std::span<const std::string> golds);

struct PredictionSet {
  std::map<std::string, std::string> answers;  // instance_id -> answer
  std::string provenance;
};

struct CorrectnessRule {
  enum class Kind { kExactMatch, kF1Threshold };
  Kind kind = Kind::kExactMatch;
  double tau = 0.8;
  // Predictions are cut to this many whitespace tokens before scoring.
  int max_answer_tokens = 10;
};

// First `max_tokens` whitespace tokens of `answer`, single-space joined.
// Answers within the limit are returned unchanged.
std::string TruncateAnswer(std::string_view answer, int max_tokens);

// Per-pair correctness of the baseline and intervention predictions. Missing
// predictions count as incorrect and are collected in `missing`.
struct PairOutcome {
  bool baseline_correct = false;
  bool intervention_correct = false;
};

struct Outcomes {
  std::vector<PairOutcome> pairs;
  std::vector<std::string> missing;
  size_t baseline_correct = 0;      // |B+|
  size_t intervention_correct = 0;  // |I+|
  size_t joint = 0;                 // |B+ ∩ I+|
};

Outcomes ScorePairs(std::span<const AlignedPair> pairs, const PredictionSet& preds,
                    const CorrectnessRule& rule = {});

// |B+ ∩ I+| / |N|. Throws kUndefinedMetric for an empty pair list.
double Consistency(std::span<const AlignedPair> pairs, const PredictionSet& preds,
                   const CorrectnessRule& rule = {});

// |B+ ∩ I+| / |B+|; nullopt when no baseline prediction is correct.
// Throws kUndefinedMetric for an empty pair list.
std::optional<double> Dice(std::span<const AlignedPair> pairs, const PredictionSet& preds,
                           const CorrectnessRule& rule = {});

// Normal-approximation half-width z(1 - alpha/2) * sqrt(p(1-p)/n).
// Throws kUndefinedMetric for n = 0 and kConfiguration for p or alpha
// outside their ranges.
double BinomialCiHalfwidth(double p, size_t n, double alpha);

struct ScoreReport {
  size_t n_pairs = 0;
  double acc_baseline = 0;
  double acc_intervention = 0;
  double joint = 0;  // consistency
  std::optional<double> dice;
  double em = 0;  // over baseline and intervention instances
  double f1 = 0;
  double alpha = 0.05;
  struct Halfwidths {
    double acc_baseline = 0;
    double acc_intervention = 0;
    double joint = 0;
    std::optional<double> dice;
  } ci_halfwidths;
  size_t baseline_correct = 0;
  size_t intervention_correct = 0;
  size_t joint_correct = 0;
  std::vector<std::string> missing;
  std::string provenance;
};

// Throws kUndefinedMetric for an empty pair list.
ScoreReport Score(std::span<const AlignedPair> pairs, const PredictionSet& preds,
                  double alpha = 0.05, const CorrectnessRule& rule = {});

// "92 ± 1" style display: both numbers in percentage points, rounded half
// away from zero.
std::string DisplayPercent(double value, double halfwidth);

}  // namespace samforge

#endif  // SAMFORGE_METRICS_H_
