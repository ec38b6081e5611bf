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

#include "samforge/quality.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "samforge/errors.h"
#include "samforge/rng.h"

namespace samforge {
namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool IsContent(Pos pos) {
  return pos == Pos::kNoun || pos == Pos::kVerb || pos == Pos::kAdj || pos == Pos::kAdv ||
         pos == Pos::kPropn;
}

void RequireNonEmpty(const AnnotatedCorpus& corpus) {
  if (corpus.passages.empty()) throw Error(ErrorKind::kUndefinedMetric, "empty corpus");
}

// Tokens of each sentence, by range containment.
std::vector<std::vector<const CorpusToken*>> SentenceTokens(const CorpusPassage& p) {
  std::vector<std::vector<const CorpusToken*>> out(p.sentences.size());
  for (const auto& t : p.tokens) {
    for (size_t s = 0; s < p.sentences.size(); ++s) {
      if (t.range.begin >= p.sentences[s].begin && t.range.end <= p.sentences[s].end) {
        out[s].push_back(&t);
        break;
      }
    }
  }
  return out;
}

std::string Surface(const CorpusPassage& p, const CorpusToken& t) {
  return Lower(std::string_view(p.text).substr(t.range.begin, t.range.size()));
}

// Mean of f(previous sentence, next sentence) over all adjacent pairs.
// Mean summed in sorted order, so passage order cannot change the last bits.
double OrderFreeMean(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  return std::accumulate(terms.begin(), terms.end(), 0.0) / static_cast<double>(terms.size());
}

template <typename PairFn>
double AdjacentMean(const AnnotatedCorpus& corpus, PairFn f) {
  RequireNonEmpty(corpus);
  std::vector<double> terms;
  for (const auto& p : corpus.passages) {
    const auto sentences = SentenceTokens(p);
    for (size_t s = 1; s < sentences.size(); ++s) terms.push_back(f(sentences[s - 1], sentences[s]));
  }
  if (terms.empty()) throw Error(ErrorKind::kUndefinedMetric, "no adjacent sentence pairs");
  return OrderFreeMean(std::move(terms));
}

std::vector<std::string> TypeSet(const CorpusPassage& p) {
  std::set<std::string> types;
  for (const auto& t : p.tokens) types.insert(Surface(p, t));
  return {types.begin(), types.end()};
}

double Jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> inter;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
  const size_t uni = a.size() + b.size() - inter.size();
  return uni == 0 ? 1.0 : static_cast<double>(inter.size()) / static_cast<double>(uni);
}

}  // namespace

CorpusPassage ToCorpusPassage(const RealizedPassage& passage) {
  CorpusPassage out;
  out.text = passage.text;
  for (const auto& s : passage.sentences) out.sentences.push_back(s.range);
  for (const auto& t : passage.tokens) out.tokens.push_back(CorpusToken{t.range, t.pos, t.lemma});
  return out;
}

void ValidateCorpus(const AnnotatedCorpus& corpus) {
  for (size_t i = 0; i < corpus.passages.size(); ++i) {
    const auto& p = corpus.passages[i];
    auto fail = [&](const std::string& msg) {
      throw Error(ErrorKind::kConsistency, "passage " + std::to_string(i) + ": " + msg);
    };
    if (p.sentences.size() < 2) fail("fewer than 2 sentences");
    for (const auto& s : p.sentences) {
      if (s.begin > s.end || s.end > p.text.size()) fail("sentence range outside text");
    }
    for (const auto& t : p.tokens) {
      if (t.range.begin >= t.range.end || t.range.end > p.text.size()) fail("token range outside text");
    }
  }
}

double AdjacentSentenceSimilarity(const AnnotatedCorpus& corpus) {
  return AdjacentMean(corpus, [](const auto& a, const auto& b) {
    std::map<std::string, double> va, vb;
    for (const CorpusToken* t : a) if (IsContent(t->pos)) va[Lower(t->lemma)] += 1;
    for (const CorpusToken* t : b) if (IsContent(t->pos)) vb[Lower(t->lemma)] += 1;
    if (va.empty() || vb.empty()) return 0.0;
    double dot = 0, na = 0, nb = 0;
    for (const auto& [k, v] : va) {
      na += v * v;
      auto it = vb.find(k);
      if (it != vb.end()) dot += v * it->second;
    }
    for (const auto& [k, v] : vb) nb += v * v;
    return dot / (std::sqrt(na) * std::sqrt(nb));
  });
}

double TypeTokenRatio(const AnnotatedCorpus& corpus) {
  RequireNonEmpty(corpus);
  std::vector<double> ratios;
  for (const auto& p : corpus.passages) {
    if (p.tokens.empty()) continue;
    ratios.push_back(static_cast<double>(TypeSet(p).size()) / static_cast<double>(p.tokens.size()));
  }
  if (ratios.empty()) throw Error(ErrorKind::kUndefinedMetric, "corpus has no tokens");
  return OrderFreeMean(std::move(ratios));
}

double AdjacentVerbOverlap(const AnnotatedCorpus& corpus) {
  return AdjacentMean(corpus, [](const auto& a, const auto& b) {
    std::set<std::string> first, second;
    for (const CorpusToken* t : a) if (t->pos == Pos::kVerb) first.insert(Lower(t->lemma));
    for (const CorpusToken* t : b) if (t->pos == Pos::kVerb) second.insert(Lower(t->lemma));
    if (second.empty()) return 0.0;
    size_t shared = 0;
    for (const auto& v : second) shared += first.contains(v);
    return static_cast<double>(shared) / static_cast<double>(second.size());
  });
}

double PronounNounRatio(const AnnotatedCorpus& corpus) {
  RequireNonEmpty(corpus);
  size_t pronouns = 0, nouns = 0;
  for (const auto& p : corpus.passages) {
    for (const auto& t : p.tokens) {
      pronouns += t.pos == Pos::kPronoun;
      nouns += t.pos == Pos::kNoun || t.pos == Pos::kPropn;
    }
  }
  if (nouns == 0) throw Error(ErrorKind::kUndefinedMetric, "corpus has no nouns");
  return static_cast<double>(pronouns) / static_cast<double>(nouns);
}

namespace {

struct JaccardResult {
  double mean = 0;
  size_t pairs = 0;
};

JaccardResult JaccardImpl(const AnnotatedCorpus& corpus, const JaccardOptions& options) {
  const size_t n = corpus.passages.size();
  if (n < 2) throw Error(ErrorKind::kUndefinedMetric, "Jaccard diversity needs 2 passages");
  std::vector<std::vector<std::string>> types;
  types.reserve(n);
  for (const auto& p : corpus.passages) types.push_back(TypeSet(p));

  std::vector<double> terms;
  if (options.sample_pairs == 0) {
    terms.reserve(n * (n - 1) / 2);
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = i + 1; j < n; ++j) terms.push_back(Jaccard(types[i], types[j]));
    }
  } else {
    Rng rng(options.seed);
    for (size_t k = 0; k < options.sample_pairs; ++k) {
      const auto i = static_cast<size_t>(rng.Uniform(0, static_cast<int64_t>(n) - 1));
      auto j = static_cast<size_t>(rng.Uniform(0, static_cast<int64_t>(n) - 2));
      if (j >= i) ++j;
      terms.push_back(Jaccard(types[i], types[j]));
    }
  }
  const size_t pairs = terms.size();
  return {OrderFreeMean(std::move(terms)), pairs};
}

}  // namespace

double JaccardDiversity(const AnnotatedCorpus& corpus, const JaccardOptions& options) {
  return JaccardImpl(corpus, options).mean;
}

QualityReport ComputeQuality(const AnnotatedCorpus& corpus, const JaccardOptions& options) {
  ValidateCorpus(corpus);
  QualityReport r;
  r.passage_count = corpus.passages.size();
  r.m1_adjacent_sentence_similarity = AdjacentSentenceSimilarity(corpus);
  r.m2_type_token_ratio = TypeTokenRatio(corpus);
  r.m3_adjacent_verb_overlap = AdjacentVerbOverlap(corpus);
  r.m4_pronoun_noun_ratio = PronounNounRatio(corpus);
  const JaccardResult j = JaccardImpl(corpus, options);
  r.lexical_diversity_jaccard = j.mean;
  r.jaccard_pairs = j.pairs;
  r.jaccard_sampled = options.sample_pairs != 0;
  return r;
}

}  // namespace samforge
