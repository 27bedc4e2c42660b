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

#include <algorithm>
#include <set>

#include "ouvls/error.hpp"
#include "ouvls/harness.hpp"
#include "ouvls/text.hpp"

namespace ouvls {

MineDecision mine_filter(std::span<const RankedClass> top_a, std::span<const RankedClass> top_b,
                         double confidence_threshold, double iou_threshold) {
  MineDecision d;
  std::set<int> a, b;
  for (const RankedClass& r : top_a) {
    d.confidence_a += r.confidence;
    a.insert(r.criterion);
  }
  for (const RankedClass& r : top_b) {
    d.confidence_b += r.confidence;
    b.insert(r.criterion);
  }
  std::vector<int> inter, uni;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(uni));
  d.iou = uni.empty() ? 0.0 : static_cast<double>(inter.size()) / static_cast<double>(uni.size());
  const bool confident = confidence_threshold <= 0.0 ||
                         (d.confidence_a > confidence_threshold && d.confidence_b > confidence_threshold);
  const bool agree = iou_threshold <= 0.0 || d.iou > iou_threshold;
  d.keep = confident && agree;
  return d;
}

namespace {

Json ranked_json(std::span<const RankedClass> ranked) {
  Json a = Json::array();
  for (const RankedClass& r : ranked) a.push_back({{"criterion", r.criterion}, {"confidence", r.confidence}});
  return a;
}

}  // namespace

Json MinedSentence::to_json() const {
  return Json{{"line", line},
              {"text", text},
              {"model_a", ranked_json(model_a)},
              {"model_b", ranked_json(model_b)},
              {"confidence_a", decision.confidence_a},
              {"confidence_b", decision.confidence_b},
              {"iou", decision.iou}};
}

std::vector<MinedSentence> mine(std::span<const std::string> texts, const LoadedModel& model_a,
                                const LoadedModel& model_b, double confidence_threshold, double iou_threshold) {
  constexpr int kTop = 3;
  std::vector<MinedSentence> kept;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const std::vector<std::string> tokens = preprocess(texts[i]);
    if (tokens.empty()) continue;
    MinedSentence m;
    m.line = i + 1;
    m.text = texts[i];
    m.model_a = predict_topk(model_a.model, model_a.featurizer, tokens, kTop);
    m.model_b = predict_topk(model_b.model, model_b.featurizer, tokens, kTop);
    m.decision = mine_filter(m.model_a, m.model_b, confidence_threshold, iou_threshold);
    if (m.decision.keep) kept.push_back(std::move(m));
  }
  return kept;
}

}  // namespace ouvls
