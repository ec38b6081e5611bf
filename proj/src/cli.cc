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

#include "samforge/cli.h"

#include <openssl/opensslv.h>

#include <algorithm>
#include <boost/version.hpp>
#include <charconv>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "samforge/errors.h"
#include "samforge/formats.h"
#include "samforge/metrics.h"
#include "samforge/pipeline.h"
#include "samforge/quality.h"

namespace samforge {

using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kAlignedJsonl = "aligned-jsonl";
constexpr const char* kSquadV1 = "squad-v1";

struct Output {
  std::string path;
  std::string contents;
};

// Accumulates the files of one run and writes them together with a manifest
// at <primary>.manifest.json.
class Run {
 public:
  Run(const CLI::App& sub, const std::vector<std::string>& args) {
    manifest_["tool"] = "samforge";
    manifest_["subcommand"] = sub.get_name();
    manifest_["argv"] = args;
    ojson config = ojson::object();
    for (const CLI::Option* opt : sub.get_options()) {
      if (opt->get_lnames().empty() || opt->get_lnames()[0] == "help") continue;
      const std::string key = opt->get_lnames()[0];
      std::string value;
      if (opt->count() > 0) {
        for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
      } else {
        value = opt->get_default_str();
        if (value == "{}") value.clear();
        if (value.size() >= 2 && value.front() == '[' && value.back() == ']') value = value.substr(1, value.size() - 2);
      }
      config[key] = value;
    }
    manifest_["config"] = std::move(config);
    manifest_["versions"] = ojson{{"samforge", kVersion},
                                  {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                                        std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                                        std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                                  {"cli11", CLI11_VERSION},
                                  {"boost", BOOST_LIB_VERSION},
                                  {"openssl", OPENSSL_VERSION_TEXT}};
  }

  void Add(std::string path, std::string contents) { outputs_.push_back({std::move(path), std::move(contents)}); }
  ojson& extra() { return manifest_; }

  void Commit(std::ostream& out) {
    auto files = ojson::array();
    for (const auto& o : outputs_) {
      if (o.path == "-") {
        out << o.contents;
        continue;
      }
      WriteTextFile(o.path, o.contents);
      files.push_back(ojson{{"path", o.path}, {"sha256", Sha256Hex(o.contents)}, {"bytes", o.contents.size()}});
    }
    if (files.empty()) return;
    manifest_["outputs"] = std::move(files);
    WriteTextFile(outputs_.front().path + ".manifest.json", manifest_.dump(2) + "\n");
  }

 private:
  ojson manifest_;
  std::vector<Output> outputs_;
};

std::string SerializePairs(std::span<const AlignedPair> pairs, const std::string& format) {
  return format == kSquadV1 ? WriteSquad(pairs) : WriteAlignedJsonl(pairs);
}

size_t ParseCount(const std::string& text, const char* flag) {
  size_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw Error(ErrorKind::kConfiguration, std::string(flag) + " expects a count, got '" + text + "'");
  }
  return value;
}

std::pair<double, double> ParseMix(const std::string& text) {
  const size_t colon = text.find(':');
  if (colon == std::string::npos) throw Error(ErrorKind::kConfiguration, "--mix expects b:i, got '" + text + "'");
  double b = 0;
  double i = 0;
  try {
    size_t used = 0;
    b = std::stod(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument(text);
    const std::string rest = text.substr(colon + 1);
    i = std::stod(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(text);
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::kConfiguration, "--mix expects b:i, got '" + text + "'");
  }
  if (b < 0 || i < 0 || b + i <= 0) throw Error(ErrorKind::kConfiguration, "--mix weights must be >= 0 and not both 0");
  return {b / (b + i), i / (b + i)};
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfiguration: return kExitUsage;
    case ErrorKind::kUndefinedMetric: return kExitUndefinedMetric;
    default: return kExitData;
  }
}

struct GenerateFlags {
  uint64_t seed = 1;
  std::string pairs = "4200";
  std::vector<int> num_sam{1, 2, 3};
  std::vector<std::string> categories;
  std::vector<std::string> qtypes;
  bool spm = true;
  std::string partition = "challenge";
  unsigned threads = 0;
  std::string templates;
  std::string lexicon;
};

void AddGenerationFlags(CLI::App* sub, GenerateFlags& f) {
  sub->add_option("--seed", f.seed, "Master seed");
  sub->add_option("--pairs", f.pairs, "Number of aligned pairs");
  sub->add_option("--num-sam", f.num_sam, "Allowed SAM counts per intervention")->delimiter(',');
  sub->add_option("--categories", f.categories, "SAM categories")->delimiter(',');
  sub->add_option("--qtypes", f.qtypes, "Question types")->delimiter(',');
  sub->add_option("--spm", f.spm, "Emit semantics-preserving controls");
  sub->add_option("--partition", f.partition, "Template partition")->check(CLI::IsMember({"augmentation", "challenge"}));
  sub->add_option("--threads", f.threads, "Worker threads (0: all cores)");
  sub->add_option("--templates", f.templates, "Template TSV (default: built-in)");
  sub->add_option("--lexicon", f.lexicon, "Lexicon TSV (default: built-in)");
}

GenerationConfig ToConfig(const GenerateFlags& f) {
  GenerationConfig c;
  c.master_seed = f.seed;
  c.n_pairs = ParseCount(f.pairs, "--pairs");
  c.num_sam_weights.clear();
  for (int k : f.num_sam) c.num_sam_weights[k] = 1.0;
  if (!f.categories.empty()) {
    c.categories.clear();
    for (const auto& s : f.categories) c.categories.push_back(ParseSamCategory(s));
  }
  if (!f.qtypes.empty()) {
    c.qtypes.clear();
    for (const auto& s : f.qtypes) c.qtypes.push_back(ParseQuestionType(s));
  }
  c.spm_enabled = f.spm;
  c.partition = ParsePartition(f.partition);
  c.threads = f.threads;
  ValidateGenerationConfig(c);
  return c;
}

std::optional<Grammar> CustomGrammar(const GenerateFlags& f) {
  if (f.templates.empty() && f.lexicon.empty()) return std::nullopt;
  if (f.templates.empty() || f.lexicon.empty()) {
    throw Error(ErrorKind::kConfiguration, "--templates and --lexicon must be given together");
  }
  return LoadGrammar(f.templates, f.lexicon);
}

void AddGrammarHashes(Run& run, const GenerateFlags& f) {
  if (f.templates.empty()) {
    run.extra()["grammar"] = "built-in";
    return;
  }
  run.extra()["grammar"] = ojson{{"templates_sha256", Sha256Hex(ReadTextFile(f.templates))},
                                 {"lexicon_sha256", Sha256Hex(ReadTextFile(f.lexicon))}};
}

CorrectnessRule MakeRule(const std::string& rule, double tau, int max_tokens) {
  CorrectnessRule r;
  r.kind = rule == "f1" ? CorrectnessRule::Kind::kF1Threshold : CorrectnessRule::Kind::kExactMatch;
  r.tau = tau;
  r.max_answer_tokens = max_tokens;
  return r;
}

PredictionSet OraclePredictions(std::span<const AlignedPair> pairs, const std::string& mode) {
  PredictionSet preds;
  preds.provenance = "oracle-run:" + mode;
  for (const auto& pair : pairs) {
    const std::string& baseline_label = pair.baseline.answers.front().text;
    auto answer = [&](const Instance& inst) {
      return mode == "perfect" ? inst.answers.front().text : baseline_label;
    };
    preds.answers[pair.baseline.instance_id] = answer(pair.baseline);
    preds.answers[pair.intervention.instance_id] = answer(pair.intervention);
    if (pair.spm) preds.answers[pair.spm->instance_id] = answer(*pair.spm);
  }
  return preds;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Challenge-set generator and evaluation harness for semantics-altering modifications", "samforge"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  GenerateFlags gen;
  std::string out_path;
  std::string format = kAlignedJsonl;
  auto* generate = app.add_subcommand("generate", "Generate an aligned challenge set");
  generate->option_defaults()->always_capture_default();
  AddGenerationFlags(generate, gen);
  generate->add_option("--format", format)->check(CLI::IsMember({kAlignedJsonl, kSquadV1}));
  generate->add_option("--out", out_path, "Output file")->required();

  std::string pairs_path;
  std::string axis = "qtype";
  std::vector<std::string> train_side;
  std::vector<std::string> eval_side;
  uint64_t seed = 1;
  auto* split = app.add_subcommand("split", "Hold out part of a challenge set along one axis");
  split->option_defaults()->always_capture_default();
  split->add_option("--pairs", pairs_path, "Challenge-set file")->required();
  split->add_option("--split-axis", axis)->check(CLI::IsMember({"qtype", "sam", "num-sam"}));
  split->add_option("--train-side", train_side, "Axis values used for augmentation")->delimiter(',');
  split->add_option("--eval-side", eval_side, "Axis values held out for evaluation")->delimiter(',');
  split->add_option("--seed", seed, "Seed of the random question-type split");
  split->add_option("--format", format)->check(CLI::IsMember({kAlignedJsonl, kSquadV1}));
  split->add_option("--out", out_path, "Output prefix")->required();

  std::string base_path;
  std::string take = "1000";
  std::string mix_ratio = "0.5:0.5";
  auto* mix = app.add_subcommand("mix", "Insert challenge instances into a SQuAD-v1 training file");
  mix->option_defaults()->always_capture_default();
  mix->add_option("--base", base_path, "SQuAD-v1 training file")->required();
  mix->add_option("--pairs", pairs_path, "Challenge-set file")->required();
  mix->add_option("--take", take, "Number of instances to insert");
  mix->add_option("--mix", mix_ratio, "Baseline:intervention proportion");
  mix->add_option("--seed", seed, "Seed of pair selection and positions");
  mix->add_option("--out", out_path, "Output file")->required();

  auto* exporter = app.add_subcommand("export", "Convert a challenge set between formats");
  exporter->option_defaults()->always_capture_default();
  exporter->add_option("--pairs", pairs_path, "Challenge-set file")->required();
  exporter->add_option("--format", format)->check(CLI::IsMember({kAlignedJsonl, kSquadV1}));
  exporter->add_option("--out", out_path, "Output file")->required();

  std::string preds_path;
  double alpha = 0.05;
  std::string rule = "em";
  double tau = 0.8;
  int max_tokens = 10;
  out_path = "-";
  auto* score = app.add_subcommand("score", "Score predictions against a challenge set");
  score->option_defaults()->always_capture_default();
  score->add_option("--pairs", pairs_path, "Challenge-set file")->required();
  score->add_option("--preds", preds_path, "Predictions: JSON object of instance_id to answer")->required();
  score->add_option("--alpha", alpha, "Significance level of the intervals");
  score->add_option("--rule", rule, "Correctness rule")->check(CLI::IsMember({"em", "f1"}));
  score->add_option("--tau", tau, "F1 threshold of the f1 rule");
  score->add_option("--max-answer-tokens", max_tokens, "Predictions are truncated to this many tokens");
  score->add_option("--out", out_path, "Report file (- for stdout)");

  std::string corpus_path;
  std::string corpus_out;
  size_t jaccard_sample = 0;
  GenerateFlags qgen;
  qgen.pairs = "1000";
  auto* quality = app.add_subcommand("quality", "Lexical and cohesion indices of a corpus");
  quality->option_defaults()->always_capture_default();
  AddGenerationFlags(quality, qgen);
  quality->add_option("--corpus", corpus_path, "Annotated corpus file instead of a generated one");
  quality->add_option("--corpus-out", corpus_out, "Also write the generated corpus");
  quality->add_option("--jaccard-sample", jaccard_sample, "Sampled passage pairs (0: all pairs)");
  quality->add_option("--out", out_path, "Report file (- for stdout)");

  std::string mode = "perfect";
  auto* oracle = app.add_subcommand("oracle-run", "Scripted reference predictor");
  oracle->option_defaults()->always_capture_default();
  oracle->add_option("--pairs", pairs_path, "Challenge-set file")->required();
  oracle->add_option("--mode", mode)->check(CLI::IsMember({"perfect", "sam-blind"}));
  oracle->add_option("--out", out_path, "Predictions file (- for stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    Run run(*sub, args);
    if (sub == generate) {
      const GenerationConfig config = ToConfig(gen);
      const auto grammar = CustomGrammar(gen);
      const auto pairs = GenerateChallengeSet(config, grammar ? *grammar : DefaultGrammar());
      AddGrammarHashes(run, gen);
      run.extra()["n_pairs"] = pairs.size();
      run.Add(out_path, SerializePairs(pairs, format));
    } else if (sub == split) {
      const auto pairs = ReadPairsFile(pairs_path);
      const SplitAxis split_axis = ParseSplitAxis(axis);
      SplitPolicy policy;
      if (split_axis == SplitAxis::kQtype && train_side.empty() && eval_side.empty()) {
        policy = RandomQtypeSplit({std::begin(kAllQuestionTypes), std::end(kAllQuestionTypes)}, seed);
      } else {
        policy = MakeSplitPolicy(split_axis, {train_side.begin(), train_side.end()},
                                 {eval_side.begin(), eval_side.end()});
      }
      const HoldoutSplit result = MakeHoldoutSplit(pairs, policy);
      const std::string ext = format == kSquadV1 ? ".json" : ".jsonl";
      run.Add(out_path + ".augmentation" + ext, SerializePairs(result.augmentation, format));
      run.Add(out_path + ".evaluation" + ext, SerializePairs(result.evaluation, format));
      run.extra()["policy"] = ojson{{"axis", Name(policy.axis)},
                                    {"train_side", policy.train_side},
                                    {"eval_side", policy.eval_side}};
      run.extra()["counts"] = ojson{{"augmentation", result.augmentation.size()},
                                    {"evaluation", result.evaluation.size()},
                                    {"dropped", result.dropped}};
    } else if (sub == mix) {
      const auto pairs = ReadPairsFile(pairs_path);
      const ojson base = ParseJson(ReadTextFile(base_path), base_path);
      const auto [b, i] = ParseMix(mix_ratio);
      const MixResult result = MixAugmentation(base, pairs, ParseCount(take, "--take"), b, i, seed);
      run.Add(out_path, result.merged.dump() + "\n");
      auto entries = ojson::array();
      for (const auto& e : result.manifest) {
        entries.push_back(ojson{{"pair_id", e.pair_id},
                                {"variant", Name(e.variant)},
                                {"instance_id", e.instance_id},
                                {"position", e.position}});
      }
      run.extra()["base_sha256"] = Sha256Hex(ReadTextFile(base_path));
      run.extra()["inserted"] = std::move(entries);
    } else if (sub == exporter) {
      const auto pairs = ReadPairsFile(pairs_path);
      run.Add(out_path, SerializePairs(pairs, format));
    } else if (sub == score) {
      const auto pairs = ReadPairsFile(pairs_path);
      const PredictionSet preds = ReadPredictions(ReadTextFile(preds_path), preds_path);
      const CorrectnessRule correctness = MakeRule(rule, tau, max_tokens);
      const ScoreReport report = Score(pairs, preds, alpha, correctness);
      run.Add(out_path, ScoreReportJson(report, correctness).dump(2) + "\n");
    } else if (sub == quality) {
      AnnotatedCorpus corpus;
      if (!corpus_path.empty()) {
        corpus = ReadCorpus(ReadTextFile(corpus_path), corpus_path);
      } else {
        const GenerationConfig config = ToConfig(qgen);
        const auto grammar = CustomGrammar(qgen);
        for (const auto& pair : GenerateChallengeSet(config, grammar ? *grammar : DefaultGrammar())) {
          corpus.passages.push_back(ToCorpusPassage(pair.baseline.passage));
        }
        AddGrammarHashes(run, qgen);
      }
      JaccardOptions options;
      options.sample_pairs = jaccard_sample;
      options.seed = qgen.seed;
      const QualityReport report = ComputeQuality(corpus, options);
      run.Add(out_path, QualityReportJson(report).dump(2) + "\n");
      if (!corpus_out.empty()) run.Add(corpus_out, WriteCorpus(corpus));
    } else if (sub == oracle) {
      const auto pairs = ReadPairsFile(pairs_path);
      run.Add(out_path, WritePredictions(OraclePredictions(pairs, mode)));
    }
    run.Commit(out);
  } catch (const Error& e) {
    err << "samforge " << sub->get_name() << ": " << e.what() << "\n";
    return ExitCodeFor(e.kind());
  }
  return kExitOk;
}

int Dispatch(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return RunCli(args, std::cout, std::cerr);
}

}  // namespace samforge
