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

#include "ouvls/metrics.hpp"

#include <algorithm>
#include <sstream>

#include "ouvls/error.hpp"

namespace ouvls {

namespace {

void check_rankings(std::span<const Ranking> predictions, std::size_t expected, int k) {
  if (predictions.size() != expected) {
    throw_domain("got " + std::to_string(predictions.size()) + " predictions for " +
                 std::to_string(expected) + " samples");
  }
  if (k < 1 || k > kNumClasses) throw_domain("k must be in [1, 11]");
  for (const Ranking& r : predictions) {
    if (r.size() < static_cast<std::size_t>(k)) throw_domain("ranking shorter than k");
    for (int c : r) {
      if (c < 1 || c > kNumClasses) throw_domain("predicted class out of range");
    }
  }
}

bool in_first(const Ranking& r, int k, int cls) {
  return std::find(r.begin(), r.begin() + k, cls) != r.begin() + k;
}

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

ConfusionMatrix confusion_matrix(std::span<const Ranking> predictions, std::span<const int> truths) {
  check_rankings(predictions, truths.size(), 1);
  ConfusionMatrix m{};
  for (std::size_t i = 0; i < truths.size(); ++i) {
    if (truths[i] < 1 || truths[i] > kNumCriteria) throw_domain("truth label out of range");
    ++m[truths[i] - 1][predictions[i][0] - 1];
  }
  return m;
}

EvalReport evaluate_split(std::span<const Ranking> predictions, std::span<const int> truths, int k) {
  check_rankings(predictions, truths.size(), k);
  EvalReport rep;
  rep.k = k;
  rep.count = truths.size();
  rep.confusion = confusion_matrix(predictions, truths);
  long hit1 = 0;
  long hitk = 0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    if (predictions[i][0] == truths[i]) ++hit1;
    if (in_first(predictions[i], k, truths[i])) ++hitk;
  }
  const auto n = static_cast<double>(truths.size());
  rep.top1_accuracy = ratio(static_cast<double>(hit1), n);
  rep.topk_accuracy = ratio(static_cast<double>(hitk), n);
  double f1_sum = 0.0;
  for (int c = 0; c < kNumCriteria; ++c) {
    long tp = rep.confusion[c][c];
    long predicted = 0;
    long actual = 0;
    for (int j = 0; j < kNumClasses; ++j) {
      predicted += rep.confusion[j][c];
      actual += rep.confusion[c][j];
    }
    ClassMetrics& cm = rep.per_class[c];
    cm.support = actual;
    cm.precision = ratio(static_cast<double>(tp), static_cast<double>(predicted));
    cm.recall = ratio(static_cast<double>(tp), static_cast<double>(actual));
    cm.f1 = ratio(2.0 * cm.precision * cm.recall, cm.precision + cm.recall);
    f1_sum += cm.f1;
  }
  rep.macro_f1 = f1_sum / kNumCriteria;
  return rep;
}

MatchReport evaluate_matches(std::span<const Ranking> predictions,
                             std::span<const ParentalLabel> parentals, int k) {
  check_rankings(predictions, parentals.size(), k);
  MatchReport rep;
  rep.k = k;
  rep.count = parentals.size();
  long hit1 = 0;
  long hitk = 0;
  for (std::size_t i = 0; i < parentals.size(); ++i) {
    const Ranking& r = predictions[i];
    auto is_parent = [&](int c) { return c <= kNumCriteria && parentals[i].values()[c - 1] == 1.0; };
    if (is_parent(r[0])) ++hit1;
    if (std::any_of(r.begin(), r.begin() + k, is_parent)) ++hitk;
  }
  const auto n = static_cast<double>(parentals.size());
  rep.top1_match = ratio(static_cast<double>(hit1), n);
  rep.topk_match = ratio(static_cast<double>(hitk), n);
  return rep;
}

Json eval_to_json(const EvalReport& r) {
  Json doc;
  doc["count"] = r.count;
  doc["k"] = r.k;
  doc["top1_accuracy"] = r.top1_accuracy;
  doc["topk_accuracy"] = r.topk_accuracy;
  doc["macro_f1"] = r.macro_f1;
  Json per = Json::object();
  for (int c = 0; c < kNumCriteria; ++c) {
    const ClassMetrics& m = r.per_class[c];
    per[std::to_string(c + 1)] = {{"precision", m.precision}, {"recall", m.recall},
                                  {"f1", m.f1}, {"support", m.support}};
  }
  doc["per_class"] = std::move(per);
  Json conf = Json::array();
  for (const auto& row : r.confusion) conf.push_back(row);
  doc["confusion"] = std::move(conf);
  return doc;
}

Json match_to_json(const MatchReport& r) {
  return Json{{"count", r.count}, {"k", r.k}, {"top1_match", r.top1_match},
              {"topk_match", r.topk_match}};
}

std::string confusion_to_csv(const ConfusionMatrix& m) {
  std::ostringstream out;
  out << "truth\\pred";
  for (int c = 1; c <= kNumClasses; ++c) out << ',' << c;
  out << '\n';
  for (int t = 0; t < kNumClasses; ++t) {
    out << t + 1;
    for (int c = 0; c < kNumClasses; ++c) out << ',' << m[t][c];
    out << '\n';
  }
  return out.str();
}

}  // namespace ouvls
