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

#include "ouvls/labels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ouvls/error.hpp"

namespace ouvls {

CooccurrenceMatrix::CooccurrenceMatrix(const Counts& counts) : counts_(counts) {
  for (const auto& row : counts_) {
    for (long v : row) {
      if (v < 0) throw_domain("co-occurrence counts must be non-negative");
    }
  }
}

long CooccurrenceMatrix::column_sum(CriterionId k) const {
  long sum = 0;
  for (int i = 0; i < kNumCriteria; ++i) sum += counts_[i][k.slot()];
  return sum;
}

long CooccurrenceMatrix::diagonal_sum() const {
  long sum = 0;
  for (int i = 0; i < kNumCriteria; ++i) sum += counts_[i][i];
  return sum;
}

bool CooccurrenceMatrix::symmetric() const {
  for (int i = 0; i < kNumCriteria; ++i) {
    for (int j = 0; j < i; ++j) {
      if (counts_[i][j] != counts_[j][i]) return false;
    }
  }
  return true;
}

CooccurrenceMatrix cooccurrence(std::span<const CriteriaSet> criteria_sets) {
  CooccurrenceMatrix::Counts counts{};
  for (const CriteriaSet& set : criteria_sets) {
    if (set.empty()) throw_domain("site with an empty criteria set");
    for (CriterionId k : set) {
      if (k.is_others()) throw_domain("criteria set cannot contain Others");
    }
    if (set.size() == 1) {
      const auto k = set.begin()->slot();
      ++counts[k][k];
      continue;
    }
    for (CriterionId k : set) {
      for (CriterionId l : set) {
        if (k != l) ++counts[k.slot()][l.slot()];
      }
    }
  }
  return CooccurrenceMatrix(counts);
}

CooccurrenceMatrix cooccurrence(std::span<const SiteRecord> sites) {
  std::vector<CriteriaSet> sets;
  sets.reserve(sites.size());
  for (const SiteRecord& s : sites) sets.push_back(s.criteria);
  return cooccurrence(std::span<const CriteriaSet>(sets));
}

PriorWeights prior_weights(const CooccurrenceMatrix& counts) {
  PriorWeights out;
  for (int k = 1; k <= kNumCriteria; ++k) {
    const CriterionId col(k);
    const long sum = counts.column_sum(col);
    if (sum <= 0) {
      throw_domain("criterion (" + std::string(criterion_roman(col)) +
                   ") never occurs; cannot normalize its prior column");
    }
    LabelVector& mu = out.mu_[col.slot()];
    for (int l = 1; l <= kNumCriteria; ++l) {
      mu[l - 1] = static_cast<double>(counts.count(CriterionId(l), col)) /
                  static_cast<double>(sum);
    }
    mu[kOthersIndex - 1] = 1.0;
  }
  return out;
}

std::vector<double> soft_softmax(std::span<const double> z) {
  std::vector<double> out(z.size());
  double denom = 0.0;
  for (std::size_t t = 0; t < z.size(); ++t) {
    if (!(z[t] >= 0.0)) throw_domain("soft_softmax needs non-negative inputs");
    out[t] = std::expm1(z[t]);
    denom += out[t];
  }
  if (denom <= 0.0) throw_domain("soft_softmax needs at least one positive input");
  for (double& v : out) v /= denom;
  return out;
}

std::vector<double> softmax(std::span<const double> z) {
  std::vector<double> out(z.size());
  if (z.empty()) return out;
  const double top = *std::max_element(z.begin(), z.end());
  double denom = 0.0;
  for (std::size_t t = 0; t < z.size(); ++t) {
    out[t] = std::exp(z[t] - top);
    denom += out[t];
  }
  for (double& v : out) v /= denom;
  return out;
}

std::string_view variant_name(SmoothingVariant v) {
  switch (v) {
    case SmoothingVariant::kNone: return "none";
    case SmoothingVariant::kVanilla: return "vanilla";
    case SmoothingVariant::kUniform: return "uniform";
    case SmoothingVariant::kPrior: return "prior";
  }
  return "none";
}

SmoothingVariant parse_variant(std::string_view name) {
  if (name == "none") return SmoothingVariant::kNone;
  if (name == "vanilla") return SmoothingVariant::kVanilla;
  if (name == "uniform") return SmoothingVariant::kUniform;
  if (name == "prior") return SmoothingVariant::kPrior;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown smoothing variant '" + std::string(name) + "'");
}

LabelVector smooth(const LabelVector& one_hot, const ParentalLabel& parental,
                   const PriorWeights* mu, const SmoothingConfig& config) {
  if (!(config.alpha >= 0.0)) throw_domain("smoothing alpha must be non-negative");
  const CriterionId label = one_hot_label(one_hot);
  if (config.variant == SmoothingVariant::kNone) return one_hot;

  LabelVector combined = one_hot;
  const LabelVector& gamma = parental.values();
  switch (config.variant) {
    case SmoothingVariant::kVanilla:
      for (double& v : combined) v += config.alpha;
      break;
    case SmoothingVariant::kUniform:
      for (int t = 0; t < kNumClasses; ++t) combined[t] += config.alpha * gamma[t];
      break;
    case SmoothingVariant::kPrior: {
      if (mu == nullptr) throw_domain("prior smoothing needs prior weights");
      const LabelVector& w = mu->mu(label);
      for (int t = 0; t < kNumClasses; ++t) combined[t] += config.alpha * w[t] * gamma[t];
      break;
    }
    case SmoothingVariant::kNone:
      break;
  }
  const std::vector<double> f = soft_softmax(combined);
  LabelVector out{};
  std::copy(f.begin(), f.end(), out.begin());
  return out;
}

std::vector<double> vanilla_smooth(std::span<const double> one_hot, double alpha) {
  if (!(alpha >= 0.0)) throw_domain("smoothing alpha must be non-negative");
  std::vector<double> combined(one_hot.begin(), one_hot.end());
  for (double& v : combined) v += alpha;
  return soft_softmax(combined);
}

double epsilon_for_alpha(double alpha, int num_classes) {
  if (!(alpha >= 0.0)) throw_domain("alpha must be non-negative");
  if (num_classes < 2) throw_domain("epsilon_for_alpha needs at least 2 classes");
  const double k = num_classes;
  // e^{1+a} + (K-1) e^a - K = e^a (e + K - 1) - K, rewritten around expm1
  // so the a = 0 case is exact.
  const double em1 = std::expm1(alpha);
  const double denom = (em1 + 1.0) * (std::exp(1.0) - 1.0) + k * em1;
  return em1 * k / denom;
}

std::vector<double> original_ls(std::span<const double> one_hot, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw_domain("epsilon must be in [0, 1)");
  const double k = static_cast<double>(one_hot.size());
  std::vector<double> out(one_hot.size());
  for (std::size_t t = 0; t < one_hot.size(); ++t) {
    out[t] = (1.0 - epsilon) * one_hot[t] + epsilon / k;
  }
  return out;
}

Json prior_to_json(const CooccurrenceMatrix& counts, const PriorWeights& mu) {
  Json doc;
  Json c = Json::array();
  for (const auto& row : counts.counts()) c.push_back(Json(row));
  doc["counts"] = std::move(c);
  Json m = Json::array();
  for (int k = 1; k <= kNumCriteria; ++k) m.push_back(Json(mu.mu(CriterionId(k))));
  doc["mu"] = std::move(m);
  return doc;
}

std::string prior_to_csv(const CooccurrenceMatrix& counts, const PriorWeights& mu) {
  std::ostringstream out;
  out << "table,row";
  for (int l = 1; l <= kNumCriteria; ++l) out << "," << criterion_roman(CriterionId(l));
  out << "\n";
  for (int k = 1; k <= kNumCriteria; ++k) {
    out << "counts," << criterion_roman(CriterionId(k));
    for (int l = 1; l <= kNumCriteria; ++l) out << "," << counts.count(CriterionId(k), CriterionId(l));
    out << "\n";
  }
  out << "table,row";
  for (int l = 1; l <= kNumClasses; ++l) out << "," << criterion_roman(CriterionId(l));
  out << "\n";
  for (int k = 1; k <= kNumCriteria; ++k) {
    out << "mu," << criterion_roman(CriterionId(k));
    for (double v : mu.mu(CriterionId(k))) out << "," << format_double(v);
    out << "\n";
  }
  return out.str();
}

CooccurrenceMatrix prior_from_json(const Json& doc) {
  try {
    const Json& c = doc.at("counts");
    if (c.size() != kNumCriteria) throw_format("prior counts must be 10x10");
    CooccurrenceMatrix::Counts counts{};
    for (int i = 0; i < kNumCriteria; ++i) {
      if (c[i].size() != kNumCriteria) throw_format("prior counts must be 10x10");
      for (int j = 0; j < kNumCriteria; ++j) counts[i][j] = c[i][j].get<long>();
    }
    return CooccurrenceMatrix(counts);
  } catch (const Json::exception& e) {
    throw_format(std::string("bad prior document: ") + e.what());
  }
}

}  // namespace ouvls
