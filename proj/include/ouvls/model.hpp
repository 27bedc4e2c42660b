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

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ouvls/features.hpp"
#include "ouvls/labels.hpp"
#include "ouvls/rng.hpp"
#include "ouvls/types.hpp"
#include "ouvls/util.hpp"

namespace ouvls {

/// Two-layer perceptron: logits = W2 relu(W1 x + b1) + b2.
/// W1 is [hidden x input], W2 is [11 x hidden].
struct MlpParams {
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;
  Eigen::VectorXd b2;

  static MlpParams zeros(std::size_t input, std::size_t hidden);
  /// Glorot-uniform weights, zero biases.
  static MlpParams glorot(std::size_t input, std::size_t hidden, Rng& rng);

  std::size_t input_dim() const { return static_cast<std::size_t>(w1.cols()); }
  std::size_t hidden_dim() const { return static_cast<std::size_t>(w1.rows()); }
  std::size_t parameter_count() const;
  double squared_norm() const;
  bool all_finite() const;

  /// Views over the four tensors, in the order w1, b1, w2, b2.
  std::array<std::span<double>, 4> tensors();
  std::array<std::span<const double>, 4> tensors() const;
};

struct TrainConfig {
  int hidden = 200;
  int batch_size = 128;
  double learning_rate = 2e-4;
  double l2 = 1e-5;
  double dropout = 0.5;
  int max_epochs = 100;
  int patience = 5;
  std::uint64_t seed = 1337;
  int topk = 3;
  SmoothingConfig smoothing;

  /// Throws kConfig on out-of-range values.
  void validate() const;
  Json to_json() const;
  static TrainConfig from_json(const Json& doc);

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct ForwardCache {
  SparseVector x;
  Eigen::VectorXd pre_activation;  // W1 x + b1
  Eigen::VectorXd hidden;          // relu, after dropout scaling if any
  Eigen::VectorXd dropout_scale;   // empty when no mask was applied
};

struct ForwardResult {
  Eigen::VectorXd logits;
  LabelVector probabilities{};
  ForwardCache cache;
};

/// `dropout_mask`, when given, multiplies the hidden activations entrywise
/// (an inverted-dropout mask holds 0 or 1/(1-p)).
ForwardResult forward(const MlpParams& params, const SparseVector& x,
                      std::optional<std::span<const double>> dropout_mask = std::nullopt);

inline constexpr double kLogStabilizer = 1e-12;

/// -sum_t target_t ln(p_t + 1e-12).
double cross_entropy_soft(const LabelVector& probabilities, const LabelVector& target);

/// Adds `scale` times the data-term gradient of one sample into `grads`.
/// The output-layer seed is (probabilities - target).
void accumulate_gradient(const ForwardResult& fwd, const LabelVector& target,
                         const MlpParams& params, double scale, MlpParams& grads);

/// Adds l2 * params to `grads` (gradient of (l2/2) ||params||^2).
void add_l2_gradient(const MlpParams& params, double l2, MlpParams& grads);

/// Exact gradient of cross_entropy_soft + (l2/2) ||params||^2 for one sample.
MlpParams backward(const ForwardResult& fwd, const LabelVector& target,
                   const MlpParams& params, double l2);

struct AdamState {
  MlpParams m;
  MlpParams v;
  long step = 0;

  static AdamState for_params(const MlpParams& params);
};

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEps = 1e-8;

void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state,
               double learning_rate);

/// One class with its probability. `criterion` is 1..11.
struct RankedClass {
  int criterion = 0;
  double confidence = 0.0;
  friend bool operator==(const RankedClass&, const RankedClass&) = default;
};

/// Classes by probability descending; ties go to the lower class index.
std::vector<RankedClass> rank_classes(const LabelVector& probabilities, int k);
std::vector<int> ranking_of(const LabelVector& probabilities);

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_top1 = 0.0;
  double val_topk = 0.0;
  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct TrainedModel {
  MlpParams params;
  FeaturizerRef featurizer_ref;
  TrainConfig config;
  int best_epoch = 0;
  std::vector<EpochRecord> history;
};

/// Class probabilities of a finished model (no dropout).
LabelVector predict_proba(const MlpParams& params, const SparseVector& x);

/// Minibatch Adam with early stopping on validation top-k accuracy. Returns
/// the parameters of the best epoch. Throws kTraining on a non-finite loss,
/// naming the epoch and batch. `prior` is needed for the prior variant.
TrainedModel train(std::span<const Sample> train_samples, std::span<const Sample> valid_samples,
                   const Featurizer& featurizer, const TrainConfig& config,
                   const PriorWeights* prior = nullptr, const LogFn& log = {});

std::vector<RankedClass> predict_topk(const TrainedModel& model, const Featurizer& featurizer,
                                      std::span<const std::string> tokens, int k);

// Checkpoints -----------------------------------------------------------------

Json model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const Json& doc);

/// Writes model.json, the featurizer file and history.csv into `dir`.
/// Sets model.featurizer_ref.
void save_model(const std::filesystem::path& dir, TrainedModel& model, const Featurizer& featurizer);

struct LoadedModel {
  TrainedModel model;
  Featurizer featurizer;
  std::filesystem::path directory;
};

/// `path` is model.json or its directory.
LoadedModel load_model(const std::filesystem::path& path);

std::string history_to_csv(std::span<const EpochRecord> history);

}  // namespace ouvls
