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

#include "samforge/metrics.h"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>

#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "samforge/errors.h"

namespace samforge {
namespace {

std::vector<std::string> SplitWhitespace(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

bool IsArticle(const std::string& w) { return w == "a" || w == "an" || w == "the"; }

double F1Single(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
  if (pred.empty() || gold.empty()) return pred.empty() && gold.empty() ? 1.0 : 0.0;
  std::unordered_map<std::string, int> counts;
  for (const auto& t : gold) ++counts[t];
  int common = 0;
  for (const auto& t : pred) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  const double precision = static_cast<double>(common) / static_cast<double>(pred.size());
  const double recall = static_cast<double>(common) / static_cast<double>(gold.size());
  return 2.0 * precision * recall / (precision + recall);
}

std::vector<std::string> Golds(const Instance& inst) {
  std::vector<std::string> golds;
  for (const auto& a : inst.answers) golds.push_back(a.text);
  return golds;
}

void RequireGolds(std::span<const std::string> golds) {
  if (golds.empty()) throw Error(ErrorKind::kConsistency, "no gold answers");
}

}  // namespace

std::string NormalizeAnswer(std::string_view s) {
  std::string lowered;
  lowered.reserve(s.size());
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 0x80 && std::ispunct(u)) continue;
    lowered.push_back(static_cast<char>(std::tolower(u)));
  }
  std::string out;
  for (const auto& word : SplitWhitespace(lowered)) {
    if (IsArticle(word)) continue;
    if (!out.empty()) out += ' ';
    out += word;
  }
  return out;
}

int ExactMatch(std::string_view pred, std::span<const std::string> golds) {
  RequireGolds(golds);
  const std::string p = NormalizeAnswer(pred);
  for (const auto& g : golds) {
    if (NormalizeAnswer(g) == p) return 1;
  }
  return 0;
}

double TokenF1(std::string_view pred, std::span<const std::string> golds) {
  RequireGolds(golds);
  const auto p = SplitWhitespace(NormalizeAnswer(pred));
  double best = 0.0;
  for (const auto& g : golds) best = std::max(best, F1Single(p, SplitWhitespace(NormalizeAnswer(g))));
  return best;
}

std::string TruncateAnswer(std::string_view answer, int max_tokens) {
  const auto tokens = SplitWhitespace(answer);
  if (max_tokens < 0 || tokens.size() <= static_cast<size_t>(max_tokens)) return std::string(answer);
  std::string out;
  for (int i = 0; i < max_tokens; ++i) {
    if (i) out += ' ';
    out += tokens[static_cast<size_t>(i)];
  }
  return out;
}

namespace {

// Correctness of one instance; nullopt when the prediction is missing.
std::optional<bool> Correct(const Instance& inst, const PredictionSet& preds,
                            const CorrectnessRule& rule) {
  auto it = preds.answers.find(inst.instance_id);
  if (it == preds.answers.end()) return std::nullopt;
  const std::string pred = TruncateAnswer(it->second, rule.max_answer_tokens);
  const auto golds = Golds(inst);
  if (rule.kind == CorrectnessRule::Kind::kExactMatch) return ExactMatch(pred, golds) == 1;
  return TokenF1(pred, golds) >= rule.tau;
}

void RequirePairs(std::span<const AlignedPair> pairs) {
  if (pairs.empty()) throw Error(ErrorKind::kUndefinedMetric, "empty pair list");
}

}  // namespace

Outcomes ScorePairs(std::span<const AlignedPair> pairs, const PredictionSet& preds,
                    const CorrectnessRule& rule) {
  Outcomes out;
  out.pairs.reserve(pairs.size());
  for (const auto& pair : pairs) {
    PairOutcome o;
    const auto b = Correct(pair.baseline, preds, rule);
    const auto i = Correct(pair.intervention, preds, rule);
    if (!b) out.missing.push_back(pair.baseline.instance_id);
    if (!i) out.missing.push_back(pair.intervention.instance_id);
    o.baseline_correct = b.value_or(false);
    o.intervention_correct = i.value_or(false);
    out.baseline_correct += o.baseline_correct;
    out.intervention_correct += o.intervention_correct;
    out.joint += o.baseline_correct && o.intervention_correct;
    out.pairs.push_back(o);
  }
  return out;
}

double Consistency(std::span<const AlignedPair> pairs, const PredictionSet& preds,
                   const CorrectnessRule& rule) {
  RequirePairs(pairs);
  const Outcomes o = ScorePairs(pairs, preds, rule);
  return static_cast<double>(o.joint) / static_cast<double>(pairs.size());
}

std::optional<double> Dice(std::span<const AlignedPair> pairs, const PredictionSet& preds,
                           const CorrectnessRule& rule) {
  RequirePairs(pairs);
  const Outcomes o = ScorePairs(pairs, preds, rule);
  if (o.baseline_correct == 0) return std::nullopt;
  return static_cast<double>(o.joint) / static_cast<double>(o.baseline_correct);
}

double BinomialCiHalfwidth(double p, size_t n, double alpha) {
  if (n == 0) throw Error(ErrorKind::kUndefinedMetric, "confidence interval over n = 0");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::kConfiguration, "proportion outside [0, 1]");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::kConfiguration, "alpha outside (0, 1)");
  const double z = boost::math::quantile(boost::math::normal_distribution<double>(), 1.0 - alpha / 2.0);
  return z * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

ScoreReport Score(std::span<const AlignedPair> pairs, const PredictionSet& preds, double alpha,
                  const CorrectnessRule& rule) {
  RequirePairs(pairs);
  const Outcomes o = ScorePairs(pairs, preds, rule);
  ScoreReport r;
  r.n_pairs = pairs.size();
  r.alpha = alpha;
  r.provenance = preds.provenance;
  r.missing = o.missing;
  r.baseline_correct = o.baseline_correct;
  r.intervention_correct = o.intervention_correct;
  r.joint_correct = o.joint;
  const double n = static_cast<double>(pairs.size());
  r.acc_baseline = static_cast<double>(o.baseline_correct) / n;
  r.acc_intervention = static_cast<double>(o.intervention_correct) / n;
  r.joint = static_cast<double>(o.joint) / n;
  if (o.baseline_correct > 0) {
    r.dice = static_cast<double>(o.joint) / static_cast<double>(o.baseline_correct);
    r.ci_halfwidths.dice = BinomialCiHalfwidth(*r.dice, o.baseline_correct, alpha);
  }
  r.ci_halfwidths.acc_baseline = BinomialCiHalfwidth(r.acc_baseline, r.n_pairs, alpha);
  r.ci_halfwidths.acc_intervention = BinomialCiHalfwidth(r.acc_intervention, r.n_pairs, alpha);
  r.ci_halfwidths.joint = BinomialCiHalfwidth(r.joint, r.n_pairs, alpha);

  // F1 terms are summed in sorted order so the mean does not depend on the
  // order of the pairs.
  double em_sum = 0;
  std::vector<double> f1_terms;
  size_t count = 0;
  for (const auto& pair : pairs) {
    for (const Instance* inst : {&pair.baseline, &pair.intervention}) {
      auto it = preds.answers.find(inst->instance_id);
      const std::string pred =
          it == preds.answers.end() ? std::string() : TruncateAnswer(it->second, rule.max_answer_tokens);
      const auto golds = Golds(*inst);
      // A missing prediction scores zero on both, even against an empty gold.
      if (it != preds.answers.end()) {
        em_sum += ExactMatch(pred, golds);
        f1_terms.push_back(TokenF1(pred, golds));
      }
      ++count;
    }
  }
  r.em = em_sum / static_cast<double>(count);
  std::sort(f1_terms.begin(), f1_terms.end());
  r.f1 = std::accumulate(f1_terms.begin(), f1_terms.end(), 0.0) / static_cast<double>(count);
  return r;
}

std::string DisplayPercent(double value, double halfwidth) {
  const auto v = static_cast<long long>(std::llround(value * 100.0));
  const auto h = static_cast<long long>(std::llround(halfwidth * 100.0));
  return std::to_string(v) + " ± " + std::to_string(h);
}

}  // namespace samforge
