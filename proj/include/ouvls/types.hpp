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
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ouvls/error.hpp"

namespace ouvls {

/// Number of real selection criteria (i - x).
inline constexpr int kNumCriteria = 10;
/// Label vector length: ten criteria plus the synthetic "Others" class.
inline constexpr int kNumClasses = kNumCriteria + 1;
inline constexpr int kOthersIndex = kNumClasses;
/// Fixed parental weight of the "Others" class.
inline constexpr double kOthersNoise = 0.2;
/// Token-count window for justification sentences.
inline constexpr std::size_t kMinSentenceTokens = 8;
inline constexpr std::size_t kMaxSentenceTokens = 64;

/// A class index in [1, 11]. 1-6 are cultural criteria, 7-10 natural, 11 is
/// "Others". `slot()` gives the zero-based position inside a LabelVector.
class CriterionId {
 public:
  constexpr explicit CriterionId(int index) : index_(index) {
    if (index < 1 || index > kNumClasses) {
      throw_domain("criterion index out of range [1, 11]: " +
                   std::to_string(index));
    }
  }

  constexpr int index() const noexcept { return index_; }
  constexpr std::size_t slot() const noexcept {
    return static_cast<std::size_t>(index_ - 1);
  }
  constexpr bool is_others() const noexcept { return index_ == kOthersIndex; }
  constexpr bool is_cultural() const noexcept { return index_ <= 6; }

  friend constexpr auto operator<=>(CriterionId, CriterionId) = default;

 private:
  int index_;
};

/// Roman numeral of a criterion in [1, 10]; "others" for 11.
std::string_view criterion_roman(CriterionId id);
/// Parses "iv", "IV", "(iv)" or "4". Returns nullopt when not a criterion.
std::optional<CriterionId> parse_criterion(std::string_view text);

using LabelVector = std::array<double, kNumClasses>;
using CriteriaSet = std::set<CriterionId>;

/// Site-level multi-hot label: 0/1 on the ten criteria, 0.2 on "Others".
class ParentalLabel {
 public:
  ParentalLabel() = default;

  static ParentalLabel from_criteria(const CriteriaSet& criteria);
  /// Validates the invariants; throws kDomain on violation.
  static ParentalLabel from_values(const LabelVector& values);

  const LabelVector& values() const noexcept { return values_; }
  double operator[](CriterionId id) const { return values_[id.slot()]; }
  bool contains(CriterionId id) const {
    return !id.is_others() && values_[id.slot()] == 1.0;
  }
  CriteriaSet criteria() const;

  friend bool operator==(const ParentalLabel&, const ParentalLabel&) = default;

 private:
  LabelVector values_{};
};

LabelVector one_hot(CriterionId id);
/// Position of the single 1 among entries 1-10; throws kDomain otherwise.
CriterionId one_hot_label(const LabelVector& one_hot);

enum class Split { kTrain, kValid, kTest, kSd };

std::string_view split_name(Split split);
Split parse_split(std::string_view name);

struct Sample {
  std::vector<std::string> tokens;
  std::optional<CriterionId> sentence_label;  // absent for kSd
  LabelVector one_hot{};                       // all zero for kSd
  ParentalLabel parental;
  int site_id = 0;
  Split split = Split::kTrain;

  std::size_t length() const noexcept { return tokens.size(); }

  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Throws kDomain naming the broken invariant.
void validate_sample(const Sample& sample);

struct SiteRecord {
  int site_id = 0;
  std::string name;
  std::map<CriterionId, std::string> justification;
  std::string short_description;
  CriteriaSet criteria;

  bool has_justification() const noexcept { return !justification.empty(); }

  friend bool operator==(const SiteRecord&, const SiteRecord&) = default;
};

}  // namespace ouvls
