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
#include <cctype>

#include "ouvls/types.hpp"

namespace ouvls {

namespace {

constexpr std::array<std::string_view, kNumCriteria> kRoman = {
    "i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x"};

}  // namespace

std::string_view criterion_roman(CriterionId id) {
  if (id.is_others()) return "others";
  return kRoman[id.slot()];
}

std::optional<CriterionId> parse_criterion(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c == '(' || c == ')' || std::isspace(static_cast<unsigned char>(c))) {
      continue;
    }
    s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (s.empty()) return std::nullopt;
  for (std::size_t i = 0; i < kRoman.size(); ++i) {
    if (s == kRoman[i]) return CriterionId(static_cast<int>(i) + 1);
  }
  if (std::all_of(s.begin(), s.end(),
                  [](char c) { return c >= '0' && c <= '9'; }) &&
      s.size() <= 2) {
    int v = std::stoi(s);
    if (v >= 1 && v <= kNumCriteria) return CriterionId(v);
  }
  return std::nullopt;
}

ParentalLabel ParentalLabel::from_criteria(const CriteriaSet& criteria) {
  ParentalLabel label;
  bool any = false;
  for (CriterionId id : criteria) {
    if (id.is_others()) throw_domain("parental label cannot contain Others");
    label.values_[id.slot()] = 1.0;
    any = true;
  }
  if (!any) throw_domain("parental label needs at least one criterion");
  label.values_[kOthersIndex - 1] = kOthersNoise;
  return label;
}

ParentalLabel ParentalLabel::from_values(const LabelVector& values) {
  bool any = false;
  for (int k = 0; k < kNumCriteria; ++k) {
    if (values[k] != 0.0 && values[k] != 1.0) {
      throw_domain("parental entry " + std::to_string(k + 1) +
                   " must be 0 or 1");
    }
    any = any || values[k] == 1.0;
  }
  if (!any) throw_domain("parental label needs at least one criterion");
  if (values[kOthersIndex - 1] != kOthersNoise) {
    throw_domain("parental Others entry must equal 0.2");
  }
  ParentalLabel label;
  label.values_ = values;
  return label;
}

CriteriaSet ParentalLabel::criteria() const {
  CriteriaSet out;
  for (int k = 1; k <= kNumCriteria; ++k) {
    if (values_[k - 1] == 1.0) out.insert(CriterionId(k));
  }
  return out;
}

LabelVector one_hot(CriterionId id) {
  LabelVector v{};
  v[id.slot()] = 1.0;
  return v;
}

CriterionId one_hot_label(const LabelVector& one_hot) {
  int found = 0;
  int count = 0;
  for (int k = 0; k < kNumClasses; ++k) {
    if (one_hot[k] == 1.0) {
      found = k + 1;
      ++count;
    } else if (one_hot[k] != 0.0) {
      throw_domain("one-hot entries must be 0 or 1");
    }
  }
  if (count != 1) throw_domain("one-hot vector must have exactly one 1");
  if (found == kOthersIndex) throw_domain("one-hot label cannot be Others");
  return CriterionId(found);
}

std::string_view split_name(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kValid: return "valid";
    case Split::kTest: return "test";
    case Split::kSd: return "sd";
  }
  return "unknown";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "valid") return Split::kValid;
  if (name == "test") return Split::kTest;
  if (name == "sd") return Split::kSd;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown split '" + std::string(name) + "'");
}

void validate_sample(const Sample& s) {
  (void)ParentalLabel::from_values(s.parental.values());
  if (s.split == Split::kSd) {
    if (s.sentence_label) throw_domain("sd sample must not carry a sentence label");
    for (double v : s.one_hot) {
      if (v != 0.0) throw_domain("sd sample one_hot must be all zero");
    }
    if (s.tokens.empty()) throw_domain("sd sample has no tokens");
    return;
  }
  if (!s.sentence_label) throw_domain("sample lacks a sentence label");
  if (s.length() < kMinSentenceTokens || s.length() > kMaxSentenceTokens) {
    throw_domain("sample length " + std::to_string(s.length()) +
                 " outside [8, 64]");
  }
  if (one_hot_label(s.one_hot) != *s.sentence_label) {
    throw_domain("one_hot disagrees with sentence_label");
  }
  if (!s.parental.contains(*s.sentence_label)) {
    throw_domain("parental label does not contain the sentence label");
  }
}

}  // namespace ouvls
