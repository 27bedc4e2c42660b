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

#include <array>
#include <span>
#include <string>
#include <vector>

#include "ouvls/types.hpp"
#include "ouvls/util.hpp"

namespace ouvls {

/// Ranked class ids (1..11), best first.
using Ranking = std::vector<int>;

/// Rows are truths, columns rank-1 predictions; index 0 is class 1.
using ConfusionMatrix = std::array<std::array<long, kNumClasses>, kNumClasses>;

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long support = 0;
  friend bool operator==(const ClassMetrics&, const ClassMetrics&) = default;
};

struct EvalReport {
  double top1_accuracy = 0.0;
  double topk_accuracy = 0.0;
  double macro_f1 = 0.0;
  std::array<ClassMetrics, kNumCriteria> per_class{};  // classes 1..10
  ConfusionMatrix confusion{};
  int k = 3;
  std::size_t count = 0;
};

struct MatchReport {
  double top1_match = 0.0;
  double topk_match = 0.0;
  int k = 3;
  std::size_t count = 0;
};

/// Truths must be in 1..10 and every ranking must hold at least k classes.
/// Precision or recall with a zero denominator is 0; macro F1 averages the
/// ten criteria and leaves out Others.
EvalReport evaluate_split(std::span<const Ranking> predictions, std::span<const int> truths, int k);

/// A sample matches when any criterion of its parental set is among the
/// first k predictions. Others never counts.
MatchReport evaluate_matches(std::span<const Ranking> predictions,
                             std::span<const ParentalLabel> parentals, int k);

ConfusionMatrix confusion_matrix(std::span<const Ranking> predictions, std::span<const int> truths);

Json eval_to_json(const EvalReport& report);
Json match_to_json(const MatchReport& report);
std::string confusion_to_csv(const ConfusionMatrix& confusion);

}  // namespace ouvls
