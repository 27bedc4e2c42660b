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
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ouvls/types.hpp"
#include "ouvls/util.hpp"

namespace ouvls {

/// Criterion co-occurrence counts over a set of sites. Off-diagonal (k, l)
/// counts sites justified under both k and l; diagonal (k, k) counts sites
/// justified under k alone.
class CooccurrenceMatrix {
 public:
  using Counts = std::array<std::array<long, kNumCriteria>, kNumCriteria>;

  CooccurrenceMatrix() = default;
  /// Throws kDomain on negative counts.
  explicit CooccurrenceMatrix(const Counts& counts);

  long count(CriterionId k, CriterionId l) const {
    return counts_[k.slot()][l.slot()];
  }
  long column_sum(CriterionId k) const;
  long diagonal_sum() const;
  bool symmetric() const;
  const Counts& counts() const noexcept { return counts_; }

  friend bool operator==(const CooccurrenceMatrix&, const CooccurrenceMatrix&) = default;

 private:
  Counts counts_{};
};

CooccurrenceMatrix cooccurrence(std::span<const SiteRecord> sites);
CooccurrenceMatrix cooccurrence(std::span<const CriteriaSet> criteria_sets);

/// Column-normalized co-occurrence: mu(k)[l] = a(l, k) / sum_i a(i, k) for
/// l in 1..10, and mu(k)[Others] = 1.
class PriorWeights {
 public:
  const LabelVector& mu(CriterionId k) const { return mu_[k.slot()]; }

 private:
  friend PriorWeights prior_weights(const CooccurrenceMatrix&);
  std::array<LabelVector, kNumCriteria> mu_{};
};

/// Throws kDomain naming the criterion when a column sums to zero.
PriorWeights prior_weights(const CooccurrenceMatrix& counts);

/// f(z)_t = (e^{z_t} - 1) / sum_l (e^{z_l} - 1). Zero entries stay exactly
/// zero. Throws kDomain on negative entries or an all-zero input.
std::vector<double> soft_softmax(std::span<const double> z);

/// Ordinary max-shifted softmax.
std::vector<double> softmax(std::span<const double> z);

enum class SmoothingVariant { kNone, kVanilla, kUniform, kPrior };

std::string_view variant_name(SmoothingVariant v);
SmoothingVariant parse_variant(std::string_view name);

struct SmoothingConfig {
  SmoothingVariant variant = SmoothingVariant::kNone;
  double alpha = 0.0;

  friend bool operator==(const SmoothingConfig&, const SmoothingConfig&) = default;
};

/// Soft training target for one sentence:
///   none     one_hot unchanged
///   vanilla  f(y + alpha * 1)
///   uniform  f(y + alpha * parental)
///   prior    f(y + alpha * (mu_k (.) parental)), k the sentence label
/// `mu` is required only for the prior variant.
LabelVector smooth(const LabelVector& one_hot, const ParentalLabel& parental,
                   const PriorWeights* mu, const SmoothingConfig& config);

/// f(y + alpha * 1) for a one-hot of any length K.
std::vector<double> vanilla_smooth(std::span<const double> one_hot, double alpha);

/// The label-smoothing strength that makes classic smoothing coincide with
/// vanilla_smooth on K classes:
///   eps = (e^a - 1) K / (e^{1+a} + (K - 1) e^a - K).
double epsilon_for_alpha(double alpha, int num_classes);

/// (1 - eps) y + (eps / K) 1, K = one_hot.size().
std::vector<double> original_ls(std::span<const double> one_hot, double epsilon);

/// {counts: 10x10, mu: 10x11}; row k of mu is mu_k.
Json prior_to_json(const CooccurrenceMatrix& counts, const PriorWeights& mu);
std::string prior_to_csv(const CooccurrenceMatrix& counts, const PriorWeights& mu);
/// Reads the counts of a prior document; mu is recomputed from them.
CooccurrenceMatrix prior_from_json(const Json& doc);

}  // namespace ouvls
