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

#ifndef SAMFORGE_QUALITY_H_
#define SAMFORGE_QUALITY_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "samforge/realizer.h"
#include "samforge/types.h"

namespace samforge {

struct CorpusToken {
  CharRange range;
  Pos pos = Pos::kNoun;
  std::string lemma;

  bool operator==(const CorpusToken&) const = default;
};

struct CorpusPassage {
  std::string text;
  std::vector<CharRange> sentences;
  std::vector<CorpusToken> tokens;

  bool operator==(const CorpusPassage&) const = default;
};

// Passages with sentence ranges and POS/lemma-tagged tokens. Generated
// passages convert directly; external corpora arrive pre-tagged through the
// corpus file format.
struct AnnotatedCorpus {
  std::vector<CorpusPassage> passages;

  bool operator==(const AnnotatedCorpus&) const = default;
};

CorpusPassage ToCorpusPassage(const RealizedPassage& passage);

// Throws kConsistency when a passage has fewer than 2 sentences or a token
// lies outside the text.
void ValidateCorpus(const AnnotatedCorpus& corpus);

// m1: mean cosine similarity of content-lemma count vectors (NOUN, VERB,
// ADJ, ADV, PROPN) over adjacent sentence pairs within each passage.
double AdjacentSentenceSimilarity(const AnnotatedCorpus& corpus);

// m2: distinct lowercased tokens over total tokens, per passage, averaged
// over passages.
double TypeTokenRatio(const AnnotatedCorpus& corpus);

// m3: mean over adjacent sentence pairs of |shared verb lemmas| / |verb
// lemmas of the second sentence|; 0 when the second sentence has no verb.
double AdjacentVerbOverlap(const AnnotatedCorpus& corpus);

// m4: PRONOUN count over NOUN + PROPN count, corpus-wide.
double PronounNounRatio(const AnnotatedCorpus& corpus);

struct JaccardOptions {
  // 0 enumerates every unordered passage pair; otherwise that many pairs
  // are drawn (with replacement) using `seed`.
  size_t sample_pairs = 0;
  uint64_t seed = 0;
};

// Mean pairwise Jaccard similarity of lowercased token-type sets. Lower is
// more diverse. Throws kUndefinedMetric for fewer than 2 passages.
double JaccardDiversity(const AnnotatedCorpus& corpus, const JaccardOptions& options = {});

struct QualityReport {
  double m1_adjacent_sentence_similarity = 0;
  double m2_type_token_ratio = 0;
  double m3_adjacent_verb_overlap = 0;
  double m4_pronoun_noun_ratio = 0;
  double lexical_diversity_jaccard = 0;
  size_t passage_count = 0;
  size_t jaccard_pairs = 0;  // pairs averaged by the Jaccard index
  bool jaccard_sampled = false;
};

QualityReport ComputeQuality(const AnnotatedCorpus& corpus, const JaccardOptions& options = {});

}  // namespace samforge

#endif  // SAMFORGE_QUALITY_H_
