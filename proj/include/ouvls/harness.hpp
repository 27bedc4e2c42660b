// Copyright (c) 2026 The ouvls Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ouvls/corpus.hpp"
#include "ouvls/features.hpp"
#include "ouvls/labels.hpp"
#include "ouvls/metrics.hpp"
#include "ouvls/model.hpp"
#include "ouvls/util.hpp"

namespace ouvls {

enum class Baseline { kNgram, kBoe };
std::string_view baseline_name(Baseline b);
Baseline parse_baseline(std::string_view name);

/// One point of the hyperparameter space: trainer settings plus the
/// featurizer knob of each baseline.
struct Setting {
  TrainConfig train;
  int min_df = 2;               // n-gram vocabulary
  int frequency_threshold = 1;  // embedding vocabulary

  Json to_json() const;
  /// Missing keys keep the values of `base`.
  static Setting from_json(const Json& doc, const Setting& base);
  friend bool operator==(const Setting&, const Setting&) = default;
};

/// Best configuration reported for each baseline.
Setting default_setting(Baseline b);

/// Candidate values per knob. An empty list keeps the base value.
struct HyperGrid {
  std::vector<int> hidden;
  std::vector<int> batch_size;
  std::vector<double> learning_rate;
  std::vector<double> l2;
  std::vector<double> dropout;
  std::vector<int> min_df;
  std::vector<int> frequency_threshold;

  Json to_json() const;
  static HyperGrid from_json(const Json& doc);
  /// Cartesian product in a fixed knob order.
  std::vector<Setting> expand(const Setting& base) const;
};

HyperGrid default_grid(Baseline b);

inline const std::vector<std::uint64_t> kDefaultSeeds{0, 1, 2, 42, 100, 233, 1024, 1337, 2333, 4399};
inline const std::vector<double> kDefaultAlphas{0, 0.01, 0.05, 0.1, 0.2, 0.5, 1};

struct ExperimentConfig {
  Baseline baseline = Baseline::kNgram;
  Setting setting = default_setting(Baseline::kNgram);
  HyperGrid grid = default_grid(Baseline::kNgram);
  std::uint64_t grid_seed = 1337;
  std::uint64_t final_seed = 1337;
  std::vector<std::uint64_t> seeds = kDefaultSeeds;
  std::vector<double> alpha_grid = kDefaultAlphas;
  std::vector<SmoothingVariant> variants{SmoothingVariant::kVanilla, SmoothingVariant::kUniform,
                                         SmoothingVariant::kPrior};
  std::filesystem::path dataset;
  std::filesystem::path embeddings;  // required for boe
  std::filesystem::path prior;       // optional; derived from sites.jsonl otherwise
  std::filesystem::path output;

  /// Throws kConfig on unusable values.
  void validate() const;
  Json to_json() const;
  static ExperimentConfig from_json(const Json& doc);
  static ExperimentConfig load(const std::filesystem::path& path);
};

// Building blocks ---------------------------------------------------------------

/// Fits the baseline's featurizer on the train split only.
Featurizer build_featurizer(Baseline b, const Setting& s, const Corpus& corpus,
                            const std::filesystem::path& embeddings, EmbeddingLoadReport* report = nullptr);

/// Co-occurrence prior of the config: the prior file when given, else the
/// dataset's sites.jsonl.
CooccurrenceMatrix load_prior_counts(const ExperimentConfig& cfg, const Corpus& corpus);
CooccurrenceMatrix prior_counts_from_dataset(const std::filesystem::path& dataset);

/// Ranked predictions (all 11 classes) for every sample of a split.
std::vector<Ranking> rank_samples(const MlpParams& params, const Featurizer& featurizer,
                                  std::span<const Sample> samples);

struct SplitEvaluation {
  std::optional<EvalReport> labelled;  // valid / test
  std::optional<MatchReport> matches;  // sd
};
SplitEvaluation evaluate_samples(const MlpParams& params, const Featurizer& featurizer,
                                 std::span<const Sample> samples, Split split, int k);

// Ingest --------------------------------------------------------------------------

struct IngestSummary {
  std::size_t sites = 0;
  std::size_t record_errors = 0;
  std::size_t train = 0, valid = 0, test = 0, sd = 0;
  Json to_json() const;
};

/// Parses the export and writes train/valid/test/sd/sites jsonl, errors.jsonl
/// and manifest.json into `out`.
IngestSummary ingest(const std::filesystem::path& csv, const std::filesystem::path& out,
                     std::uint64_t seed, const std::optional<std::filesystem::path>& definitions,
                     const LogFn& log = {});

// Protocol steps ------------------------------------------------------------------

struct TrainOutcome {
  TrainedModel model;
  EvalReport valid;
  EvalReport test;
  std::filesystem::path directory;
};

/// Trains one model with the base setting and `final_seed`; writes the
/// checkpoint and evaluation into <output>/train.
TrainOutcome run_train(const ExperimentConfig& cfg, const LogFn& log = {});

struct GridEntry {
  Setting setting;
  bool ok = false;
  std::string error;
  int best_epoch = 0;
  double val_top1 = 0.0;
  double val_topk = 0.0;
  Json to_json() const;
  static GridEntry from_json(const Json& doc, const Setting& base);
};

struct GridResult {
  std::vector<GridEntry> entries;
  Setting best;
};

/// Step 1. Single seed; best by validation top-k (first setting wins ties).
/// Writes grid_log.jsonl and best_setting.json into <output>/grid.
GridResult run_grid_search(const ExperimentConfig& cfg, const LogFn& log = {});

struct SweepRun {
  SmoothingVariant variant = SmoothingVariant::kVanilla;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  int best_epoch = 0;
  double val_top1 = 0.0;
  double val_topk = 0.0;
  Json to_json() const;
  static SweepRun from_json(const Json& doc);
};

struct SweepCell {
  SmoothingVariant variant = SmoothingVariant::kVanilla;
  double alpha = 0.0;
  std::size_t completed = 0;
  double mean_top1 = 0.0, sd_top1 = 0.0;
  double mean_topk = 0.0, sd_topk = 0.0;
  bool eligible = false;  // at least two completed seeds
  double score = 0.0;
  Json to_json() const;
  static SweepCell from_json(const Json& doc);
};

struct SweepResult {
  std::vector<SweepCell> cells;  // variant order, then alpha
  std::optional<SweepCell> chosen;
  Json to_json() const;
  static SweepResult from_json(const Json& doc);
};

/// Lower 95% bound of `values`' mean: mean - 1.96 sd / sqrt(n), sample sd.
double lower_confidence_bound(std::span<const double> values);

/// Aggregates runs into cells and picks the best eligible cell by score;
/// ties go to the smaller alpha, then vanilla < uniform < prior.
SweepResult summarize_sweep(std::span<const SweepRun> runs, std::span<const SmoothingVariant> variants,
                            std::span<const double> alphas);

/// Step 2. Uses <output>/grid/best_setting.json, running step 1 when it is
/// absent. Completed runs in <output>/sweep/runs.jsonl are reused when the
/// manifest matches.
SweepResult run_ls_sweep(const ExperimentConfig& cfg, const LogFn& log = {});

struct FinalRow {
  std::string label;  // "no_ls" or "ls"
  SmoothingConfig smoothing;
  EvalReport valid;
  EvalReport test;
  std::optional<MatchReport> sd;
  Json to_json() const;
};

struct FinalResult {
  std::vector<FinalRow> rows;
  bool partial = false;  // SD set missing
};

/// Step 3. Trains the no-LS model and the chosen-LS model with final_seed.
FinalResult run_final(const ExperimentConfig& cfg, const LogFn& log = {});

// Mining --------------------------------------------------------------------------

struct MineDecision {
  bool keep = false;
  double confidence_a = 0.0;
  double confidence_b = 0.0;
  double iou = 0.0;
};

/// Both top-3 confidence sums must exceed `confidence_threshold` and the
/// IoU of the two top-3 sets must exceed `iou_threshold`. A threshold <= 0
/// disables its gate.
MineDecision mine_filter(std::span<const RankedClass> top_a, std::span<const RankedClass> top_b,
                         double confidence_threshold, double iou_threshold);

struct MinedSentence {
  std::size_t line = 0;
  std::string text;
  std::vector<RankedClass> model_a;
  std::vector<RankedClass> model_b;
  MineDecision decision;
  Json to_json() const;
};

/// Applies both models to each non-empty line and keeps the agreed ones.
std::vector<MinedSentence> mine(std::span<const std::string> texts, const LoadedModel& model_a,
                                const LoadedModel& model_b, double confidence_threshold = 0.8,
                                double iou_threshold = 0.5);

// Report --------------------------------------------------------------------------

struct ReportOutput {
  std::string text;
  Json summary;
  std::string curves_csv;
};

/// Summarizes the run directories under `dir` (itself or its children) and
/// writes report.json, report.txt and curves.csv. Throws kIo listing the
/// expected files when nothing is found.
ReportOutput report(const std::filesystem::path& dir);

}  // namespace ouvls
