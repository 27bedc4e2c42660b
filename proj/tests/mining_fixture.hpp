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

// Ten one-word sentences and two hand-built models whose top-3 outputs are
// known exactly, for checking the mining rule.

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "ouvls/harness.hpp"

namespace ouvls::testing {

// Mining fixture: sentence i is the single word "w" + ('a' + i). The models
// map each word straight to a constructed class distribution.
struct Top3 {
  std::array<int, 3> classes;
  double mass;
};

inline LabelVector distribution(const Top3& t) {
  LabelVector p;
  p.fill((1.0 - t.mass) / 8.0);
  const double share[3] = {0.5, 0.3, 0.2};
  for (int j = 0; j < 3; ++j) p[static_cast<std::size_t>(t.classes[j] - 1)] = t.mass * share[j];
  return p;
}

inline LoadedModel constructed_model(const std::vector<Top3>& rows) {
  const std::size_t n = rows.size();
  std::vector<std::string> words;
  for (std::size_t i = 0; i < n; ++i) words.push_back(std::string("w") + static_cast<char>('a' + i));
  TfidfVocabulary vocab(words, std::vector<double>(n, 1.0), 1);
  TrainedModel m;
  m.params = MlpParams::zeros(n, n);
  m.params.w1.setIdentity();
  for (std::size_t i = 0; i < n; ++i) {
    const LabelVector p = distribution(rows[i]);
    for (int t = 0; t < kNumClasses; ++t) m.params.w2(t, static_cast<Eigen::Index>(i)) = std::log(p[t]);
  }
  m.best_epoch = 1;
  return LoadedModel{m, Featurizer(vocab), {}};
}

inline const std::vector<Top3> kMiningA{{{1, 2, 3}, 0.9},  {{1, 2, 3}, 0.9},  {{4, 5, 6}, 0.95}, {{7, 8, 9}, 0.85},
                                {{1, 2, 3}, 0.6},  {{10, 11, 1}, 0.9}, {{2, 3, 4}, 0.9},  {{3, 4, 5}, 0.81},
                                {{6, 7, 8}, 0.9},  {{1, 5, 9}, 0.82}};
inline const std::vector<Top3> kMiningB{{{1, 3, 2}, 0.9},  {{1, 2, 4}, 0.9},  {{4, 5, 6}, 0.7},  {{9, 8, 7}, 0.85},
                                {{1, 2, 3}, 0.6},  {{10, 11, 1}, 0.9}, {{5, 6, 7}, 0.9},  {{3, 4, 5}, 0.99},
                                {{6, 7, 9}, 0.9},  {{1, 5, 9}, 0.79}};

/// Applies both rules directly to the constructed distributions.
inline std::vector<std::size_t> brute_force_keep(double conf, double iou) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < kMiningA.size(); ++i) {
    auto top = [](const LabelVector& p) {
      std::vector<int> idx(kNumClasses);
      std::iota(idx.begin(), idx.end(), 0);
      std::stable_sort(idx.begin(), idx.end(), [&](int x, int y) { return p[x] > p[y]; });
      std::set<int> s;
      double mass = 0.0;
      for (int j = 0; j < 3; ++j) {
        s.insert(idx[j] + 1);
        mass += p[idx[j]];
      }
      return std::pair{s, mass};
    };
    const auto [sa, ma] = top(distribution(kMiningA[i]));
    const auto [sb, mb] = top(distribution(kMiningB[i]));
    std::set<int> inter, uni;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(inter, inter.end()));
    std::set_union(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(uni, uni.end()));
    const double j = static_cast<double>(inter.size()) / static_cast<double>(uni.size());
    const bool ok_conf = conf <= 0 || (ma > conf && mb > conf);
    const bool ok_iou = iou <= 0 || j > iou;
    if (ok_conf && ok_iou) keep.push_back(i + 1);
  }
  return keep;
}

inline std::vector<std::string> mining_texts() {
  std::vector<std::string> t;
  for (std::size_t i = 0; i < kMiningA.size(); ++i) t.push_back(std::string("W") + static_cast<char>('a' + i));
  return t;
}

}  // namespace ouvls::testing
