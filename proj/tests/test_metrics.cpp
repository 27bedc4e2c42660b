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
#include <numeric>

#include "doctest.h"
#include "ouvls/error.hpp"
#include "ouvls/metrics.hpp"
#include "ouvls/rng.hpp"

using namespace ouvls;
using doctest::Approx;

namespace {

/// The given leading classes, then every other class ascending.
Ranking ranked(std::initializer_list<int> head) {
  Ranking r(head);
  for (int c = 1; c <= kNumClasses; ++c) {
    if (std::find(r.begin(), r.end(), c) == r.end()) r.push_back(c);
  }
  return r;
}

ParentalLabel parent(std::initializer_list<int> ids) {
  CriteriaSet s;
  for (int i : ids) s.insert(CriterionId(i));
  return ParentalLabel::from_criteria(s);
}

struct Fixture {
  std::vector<Ranking> predictions;
  std::vector<int> truths;
};

Fixture labelled_fixture() {
  return {{ranked({1, 2, 3}), ranked({2, 1, 3}), ranked({3, 4, 5}), ranked({2}), ranked({1, 2}),
           ranked({3}), ranked({3}), ranked({4, 3}), ranked({5, 6, 7}), ranked({4})},
          {1, 1, 1, 2, 2, 3, 3, 3, 3, 4}};
}

Fixture random_fixture(Rng& rng, std::size_t n) {
  Fixture f;
  for (std::size_t i = 0; i < n; ++i) {
    Ranking r(kNumClasses);
    std::iota(r.begin(), r.end(), 1);
    rng.shuffle(r);
    f.predictions.push_back(r);
    f.truths.push_back(1 + static_cast<int>(rng.below(kNumCriteria)));
  }
  return f;
}

}  // namespace

TEST_CASE("evaluate_split on a hand-computed fixture") {
  const Fixture f = labelled_fixture();
  const EvalReport r = evaluate_split(f.predictions, f.truths, 3);
  CHECK(r.count == 10);
  CHECK(r.top1_accuracy == 0.5);
  CHECK(r.topk_accuracy == 0.8);
  CHECK(r.per_class[0].precision == 0.5);
  CHECK(r.per_class[0].recall == Approx(1.0 / 3));
  CHECK(r.per_class[0].f1 == Approx(0.4));
  CHECK(r.per_class[0].support == 3);
  CHECK(r.per_class[2].precision == Approx(2.0 / 3));
  CHECK(r.per_class[2].recall == 0.5);
  CHECK(r.per_class[2].f1 == Approx(4.0 / 7));
  CHECK(r.per_class[3].f1 == Approx(2.0 / 3));
  CHECK(r.per_class[4] == ClassMetrics{0.0, 0.0, 0.0, 0});
  CHECK(r.macro_f1 == Approx(449.0 / 2100).epsilon(1e-14));
  CHECK(r.confusion[2][3] == 1);  // truth 3 predicted as 4
  CHECK(r.confusion[0][0] == 1);
  CHECK(evaluate_split(f.predictions, f.truths, 11).topk_accuracy == 1.0);
}

TEST_CASE("evaluate_matches on a hand-computed fixture") {
  const std::vector<Ranking> preds{ranked({2}),        ranked({11, 1}), ranked({4, 5, 6}), ranked({6}),
                                   ranked({1, 2, 7}),  ranked({10}),    ranked({3, 11, 4}), ranked({8}),
                                   ranked({1, 9}),     ranked({2, 3, 4}), ranked({11, 2, 3}), ranked({6})};
  const std::vector<ParentalLabel> parents{parent({1, 2}), parent({1}),    parent({3}), parent({5, 6}),
                                           parent({7}),    parent({10}),   parent({2}), parent({4, 8}),
                                           parent({9}),    parent({1}),    parent({3, 4}), parent({6})};
  const MatchReport m = evaluate_matches(preds, parents, 3);
  CHECK(m.count == 12);
  CHECK(m.top1_match == Approx(5.0 / 12).epsilon(1e-15));
  CHECK(m.topk_match == Approx(9.0 / 12).epsilon(1e-15));
  CHECK(evaluate_matches(preds, parents, 11).topk_match == 1.0);

  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(4);
  rng.shuffle(order);
  std::vector<Ranking> p2;
  std::vector<ParentalLabel> q2;
  for (auto i : order) {
    p2.push_back(preds[i]);
    q2.push_back(parents[i]);
  }
  const MatchReport shuffled = evaluate_matches(p2, q2, 3);
  CHECK(shuffled.top1_match == m.top1_match);
  CHECK(shuffled.topk_match == m.topk_match);
}

TEST_CASE("metric properties on random fixtures") {
  Rng rng(77);
  for (int round = 0; round < 20; ++round) {
    const Fixture f = random_fixture(rng, 40);
    double last = -1.0;
    for (int k = 1; k <= kNumClasses; ++k) {
      const double acc = evaluate_split(f.predictions, f.truths, k).topk_accuracy;
      CHECK(acc >= last);
      last = acc;
    }
    CHECK(last == 1.0);

    const EvalReport base = evaluate_split(f.predictions, f.truths, 3);
    long trace = 0;
    for (int c = 0; c < kNumClasses; ++c) trace += base.confusion[c][c];
    CHECK(static_cast<double>(trace) / 40 == Approx(base.top1_accuracy).epsilon(1e-15));
    CHECK(base.confusion == confusion_matrix(f.predictions, f.truths));

    // Renaming the criteria consistently leaves every aggregate unchanged.
    std::vector<int> perm(kNumCriteria);
    std::iota(perm.begin(), perm.end(), 1);
    rng.shuffle(perm);
    auto rename = [&](int c) { return c == kOthersIndex ? c : perm[static_cast<std::size_t>(c - 1)]; };
    Fixture g = f;
    for (auto& r : g.predictions) std::transform(r.begin(), r.end(), r.begin(), rename);
    std::transform(g.truths.begin(), g.truths.end(), g.truths.begin(), rename);
    const EvalReport renamed = evaluate_split(g.predictions, g.truths, 3);
    CHECK(renamed.top1_accuracy == base.top1_accuracy);
    CHECK(renamed.topk_accuracy == base.topk_accuracy);
    CHECK(renamed.macro_f1 == Approx(base.macro_f1).epsilon(1e-12));
  }
}

TEST_CASE("metric input validation") {
  const Fixture f = labelled_fixture();
  const std::vector<int> short_truths(f.truths.begin(), f.truths.end() - 1);
  CHECK_THROWS_AS(evaluate_split(f.predictions, short_truths, 3), Error);
  CHECK_THROWS_AS(evaluate_split(f.predictions, f.truths, 0), Error);
  std::vector<int> bad = f.truths;
  bad[0] = 11;
  CHECK_THROWS_AS(evaluate_split(f.predictions, bad, 3), Error);
  const std::vector<ParentalLabel> parents(3, parent({1}));
  CHECK_THROWS_AS(evaluate_matches(f.predictions, parents, 3), Error);
}

TEST_CASE("metric serialization") {
  const Fixture f = labelled_fixture();
  const EvalReport r = evaluate_split(f.predictions, f.truths, 3);
  const Json doc = eval_to_json(r);
  CHECK(doc.at("top1_accuracy") == 0.5);
  CHECK(doc.at("count") == 10);
  const std::string csv = confusion_to_csv(r.confusion);
  CHECK(csv.rfind("truth\\pred,1,2,3,4,5,6,7,8,9,10,11\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
}
