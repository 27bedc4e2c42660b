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

#include "ouvls/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ouvls/error.hpp"

namespace ouvls {

MlpParams MlpParams::zeros(std::size_t input, std::size_t hidden) {
  MlpParams p;
  const auto in = static_cast<Eigen::Index>(input);
  const auto h = static_cast<Eigen::Index>(hidden);
  p.w1 = Eigen::MatrixXd::Zero(h, in);
  p.b1 = Eigen::VectorXd::Zero(h);
  p.w2 = Eigen::MatrixXd::Zero(kNumClasses, h);
  p.b2 = Eigen::VectorXd::Zero(kNumClasses);
  return p;
}

MlpParams MlpParams::glorot(std::size_t input, std::size_t hidden, Rng& rng) {
  MlpParams p = zeros(input, hidden);
  auto fill = [&](Eigen::MatrixXd& w) {
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = rng.uniform(-limit, limit);
    }
  };
  fill(p.w1);
  fill(p.w2);
  return p;
}

std::size_t MlpParams::parameter_count() const {
  return static_cast<std::size_t>(w1.size() + b1.size() + w2.size() + b2.size());
}

double MlpParams::squared_norm() const {
  return w1.squaredNorm() + b1.squaredNorm() + w2.squaredNorm() + b2.squaredNorm();
}

bool MlpParams::all_finite() const {
  return w1.allFinite() && b1.allFinite() && w2.allFinite() && b2.allFinite();
}

std::array<std::span<double>, 4> MlpParams::tensors() {
  return {std::span<double>(w1.data(), static_cast<std::size_t>(w1.size())),
          std::span<double>(b1.data(), static_cast<std::size_t>(b1.size())),
          std::span<double>(w2.data(), static_cast<std::size_t>(w2.size())),
          std::span<double>(b2.data(), static_cast<std::size_t>(b2.size()))};
}

std::array<std::span<const double>, 4> MlpParams::tensors() const {
  return {std::span<const double>(w1.data(), static_cast<std::size_t>(w1.size())),
          std::span<const double>(b1.data(), static_cast<std::size_t>(b1.size())),
          std::span<const double>(w2.data(), static_cast<std::size_t>(w2.size())),
          std::span<const double>(b2.data(), static_cast<std::size_t>(b2.size()))};
}

void TrainConfig::validate() const {
  if (hidden < 1) throw_config("hidden must be at least 1");
  if (batch_size < 1) throw_config("batch_size must be at least 1");
  if (!(learning_rate >= 0.0)) throw_config("learning_rate must be non-negative");
  if (!(l2 >= 0.0)) throw_config("l2 must be non-negative");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw_config("dropout must be in [0, 1)");
  if (max_epochs < 1) throw_config("max_epochs must be at least 1");
  if (patience < 1) throw_config("patience must be at least 1");
  if (topk < 1 || topk > kNumClasses) throw_config("topk must be in [1, 11]");
  if (!(smoothing.alpha >= 0.0)) throw_config("smoothing alpha must be non-negative");
}

Json TrainConfig::to_json() const {
  Json doc;
  doc["hidden"] = hidden;
  doc["batch_size"] = batch_size;
  doc["learning_rate"] = learning_rate;
  doc["l2"] = l2;
  doc["dropout"] = dropout;
  doc["max_epochs"] = max_epochs;
  doc["patience"] = patience;
  doc["seed"] = seed;
  doc["topk"] = topk;
  doc["smoothing"] = {{"variant", std::string(variant_name(smoothing.variant))},
                      {"alpha", smoothing.alpha}};
  return doc;
}

TrainConfig TrainConfig::from_json(const Json& doc) {
  TrainConfig c;
  try {
    c.hidden = doc.value("hidden", c.hidden);
    c.batch_size = doc.value("batch_size", c.batch_size);
    c.learning_rate = doc.value("learning_rate", c.learning_rate);
    c.l2 = doc.value("l2", c.l2);
    c.dropout = doc.value("dropout", c.dropout);
    c.max_epochs = doc.value("max_epochs", c.max_epochs);
    c.patience = doc.value("patience", c.patience);
    c.seed = doc.value("seed", c.seed);
    c.topk = doc.value("topk", c.topk);
    if (doc.contains("smoothing")) {
      const Json& s = doc.at("smoothing");
      c.smoothing.variant = parse_variant(s.value("variant", std::string("none")));
      c.smoothing.alpha = s.value("alpha", 0.0);
    }
  } catch (const Json::exception& e) {
    throw_config(std::string("bad training config: ") + e.what());
  }
  return c;
}

ForwardResult forward(const MlpParams& params, const SparseVector& x,
                      std::optional<std::span<const double>> dropout_mask) {
  if (x.dimension != params.input_dim()) {
    throw_domain("feature dimension " + std::to_string(x.dimension) +
                 " does not match model input " + std::to_string(params.input_dim()));
  }
  ForwardResult out;
  out.cache.x = x;
  Eigen::VectorXd z1 = params.b1;
  for (std::size_t i = 0; i < x.nnz(); ++i) {
    z1.noalias() += x.values[i] * params.w1.col(static_cast<Eigen::Index>(x.indices[i]));
  }
  Eigen::VectorXd h = z1.cwiseMax(0.0);
  if (dropout_mask) {
    if (dropout_mask->size() != static_cast<std::size_t>(h.size())) {
      throw_domain("dropout mask size does not match the hidden layer");
    }
    out.cache.dropout_scale =
        Eigen::Map<const Eigen::VectorXd>(dropout_mask->data(), h.size());
    h.array() *= out.cache.dropout_scale.array();
  }
  out.logits = params.w2 * h + params.b2;
  std::array<double, kNumClasses> logits{};
  for (int t = 0; t < kNumClasses; ++t) logits[t] = out.logits(t);
  const std::vector<double> p = softmax(logits);
  std::copy(p.begin(), p.end(), out.probabilities.begin());
  out.cache.pre_activation = std::move(z1);
  out.cache.hidden = std::move(h);
  return out;
}

LabelVector predict_proba(const MlpParams& params, const SparseVector& x) {
  return forward(params, x).probabilities;
}

double cross_entropy_soft(const LabelVector& probabilities, const LabelVector& target) {
  double loss = 0.0;
  for (int t = 0; t < kNumClasses; ++t) {
    if (target[t] != 0.0) loss -= target[t] * std::log(probabilities[t] + kLogStabilizer);
  }
  return loss;
}

void accumulate_gradient(const ForwardResult& fwd, const LabelVector& target,
                         const MlpParams& params, double scale, MlpParams& grads) {
  Eigen::VectorXd delta_out(kNumClasses);
  for (int t = 0; t < kNumClasses; ++t) delta_out(t) = scale * (fwd.probabilities[t] - target[t]);
  grads.w2.noalias() += delta_out * fwd.cache.hidden.transpose();
  grads.b2 += delta_out;

  Eigen::VectorXd delta_hidden = params.w2.transpose() * delta_out;
  if (fwd.cache.dropout_scale.size() > 0) delta_hidden.array() *= fwd.cache.dropout_scale.array();
  for (Eigen::Index j = 0; j < delta_hidden.size(); ++j) {
    if (fwd.cache.pre_activation(j) <= 0.0) delta_hidden(j) = 0.0;
  }
  grads.b1 += delta_hidden;
  const SparseVector& x = fwd.cache.x;
  for (std::size_t i = 0; i < x.nnz(); ++i) {
    grads.w1.col(static_cast<Eigen::Index>(x.indices[i])).noalias() += x.values[i] * delta_hidden;
  }
}

void add_l2_gradient(const MlpParams& params, double l2, MlpParams& grads) {
  if (l2 == 0.0) return;
  grads.w1 += l2 * params.w1;
  grads.b1 += l2 * params.b1;
  grads.w2 += l2 * params.w2;
  grads.b2 += l2 * params.b2;
}

MlpParams backward(const ForwardResult& fwd, const LabelVector& target, const MlpParams& params,
                   double l2) {
  MlpParams grads = MlpParams::zeros(params.input_dim(), params.hidden_dim());
  accumulate_gradient(fwd, target, params, 1.0, grads);
  add_l2_gradient(params, l2, grads);
  return grads;
}

AdamState AdamState::for_params(const MlpParams& params) {
  return AdamState{MlpParams::zeros(params.input_dim(), params.hidden_dim()),
                   MlpParams::zeros(params.input_dim(), params.hidden_dim()), 0};
}

void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state, double learning_rate) {
  ++state.step;
  const double bc1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(state.step));
  auto p = params.tensors();
  auto g = grads.tensors();
  auto m = state.m.tensors();
  auto v = state.v.tensors();
  for (std::size_t t = 0; t < p.size(); ++t) {
    for (std::size_t i = 0; i < p[t].size(); ++i) {
      const double gi = g[t][i];
      m[t][i] = kAdamBeta1 * m[t][i] + (1.0 - kAdamBeta1) * gi;
      v[t][i] = kAdamBeta2 * v[t][i] + (1.0 - kAdamBeta2) * gi * gi;
      const double mhat = m[t][i] / bc1;
      const double vhat = v[t][i] / bc2;
      p[t][i] -= learning_rate * mhat / (std::sqrt(vhat) + kAdamEps);
    }
  }
}

std::vector<int> ranking_of(const LabelVector& probabilities) {
  std::vector<int> order(kNumClasses);
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return probabilities[a - 1] > probabilities[b - 1];
  });
  return order;
}

std::vector<RankedClass> rank_classes(const LabelVector& probabilities, int k) {
  if (k < 1 || k > kNumClasses) throw_domain("k must be in [1, 11]");
  const std::vector<int> order = ranking_of(probabilities);
  std::vector<RankedClass> out;
  for (int i = 0; i < k; ++i) out.push_back({order[i], probabilities[order[i] - 1]});
  return out;
}

namespace {

std::pair<double, double> eval_topk(const MlpParams& params, std::span<const SparseVector> xs,
                                    std::span<const int> truths, int k) {
  std::size_t hit1 = 0;
  std::size_t hitk = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const std::vector<int> order = ranking_of(predict_proba(params, xs[i]));
    if (order[0] == truths[i]) ++hit1;
    if (std::find(order.begin(), order.begin() + k, truths[i]) != order.begin() + k) ++hitk;
  }
  const double n = static_cast<double>(xs.size());
  return {hit1 / n, hitk / n};
}

}  // namespace

TrainedModel train(std::span<const Sample> train_samples, std::span<const Sample> valid_samples,
                   const Featurizer& featurizer, const TrainConfig& config,
                   const PriorWeights* prior, const LogFn& log) {
  config.validate();
  if (train_samples.empty()) throw Error(ErrorCode::kTraining, "empty train split");
  if (valid_samples.empty()) throw Error(ErrorCode::kTraining, "empty valid split");
  if (config.smoothing.variant == SmoothingVariant::kPrior && prior == nullptr) {
    throw_config("prior smoothing requires prior weights");
  }

  std::vector<SparseVector> xs;
  std::vector<LabelVector> targets;
  xs.reserve(train_samples.size());
  for (const Sample& s : train_samples) {
    if (!s.sentence_label) throw_domain("training sample without a sentence label");
    xs.push_back(featurizer.featurize(s.tokens));
    targets.push_back(smooth(s.one_hot, s.parental, prior, config.smoothing));
  }
  std::vector<SparseVector> val_xs;
  std::vector<int> val_truth;
  for (const Sample& s : valid_samples) {
    if (!s.sentence_label) throw_domain("validation sample without a sentence label");
    val_xs.push_back(featurizer.featurize(s.tokens));
    val_truth.push_back(s.sentence_label->index());
  }

  Rng rng(config.seed);
  const auto hidden = static_cast<std::size_t>(config.hidden);
  MlpParams params = MlpParams::glorot(featurizer.dimension(), hidden, rng);
  MlpParams grads = MlpParams::zeros(featurizer.dimension(), hidden);
  AdamState adam = AdamState::for_params(params);

  TrainedModel result;
  result.config = config;
  result.params = params;
  double best_topk = -1.0;
  int since_best = 0;

  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> mask(hidden);
  const double keep_scale = 1.0 / (1.0 - config.dropout);
  const auto batch = static_cast<std::size_t>(config.batch_size);

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    int batch_index = 0;
    for (std::size_t start = 0; start < order.size(); start += batch, ++batch_index) {
      const std::size_t end = std::min(order.size(), start + batch);
      const double scale = 1.0 / static_cast<double>(end - start);
      for (auto t : grads.tensors()) std::fill(t.begin(), t.end(), 0.0);
      for (std::size_t b = start; b < end; ++b) {
        const std::size_t i = order[b];
        std::optional<std::span<const double>> m;
        if (config.dropout > 0.0) {
          for (double& v : mask) v = rng.bernoulli(1.0 - config.dropout) ? keep_scale : 0.0;
          m = std::span<const double>(mask);
        }
        const ForwardResult fwd = forward(params, xs[i], m);
        const double loss = cross_entropy_soft(fwd.probabilities, targets[i]);
        if (!std::isfinite(loss)) {
          throw Error(ErrorCode::kTraining, "non-finite loss at epoch " + std::to_string(epoch) +
                                                ", batch " + std::to_string(batch_index + 1));
        }
        loss_sum += loss;
        accumulate_gradient(fwd, targets[i], params, scale, grads);
      }
      add_l2_gradient(params, config.l2, grads);
      adam_step(params, grads, adam, config.learning_rate);
    }
    if (!params.all_finite()) {
      throw Error(ErrorCode::kTraining,
                  "parameters became non-finite at epoch " + std::to_string(epoch));
    }

    const auto [top1, topk] = eval_topk(params, val_xs, val_truth, config.topk);
    result.history.push_back({epoch, loss_sum / static_cast<double>(xs.size()), top1, topk});
    if (log) {
      log("epoch " + std::to_string(epoch) + " loss " + format_double(result.history.back().train_loss) +
          " val_top1 " + format_double(top1) + " val_top" + std::to_string(config.topk) + " " +
          format_double(topk));
    }
    if (topk > best_topk) {
      best_topk = topk;
      result.best_epoch = epoch;
      result.params = params;
      since_best = 0;
    } else if (++since_best >= config.patience) {
      break;
    }
  }
  return result;
}

std::vector<RankedClass> predict_topk(const TrainedModel& model, const Featurizer& featurizer,
                                      std::span<const std::string> tokens, int k) {
  return rank_classes(predict_proba(model.params, featurizer.featurize(tokens)), k);
}

}  // namespace ouvls
