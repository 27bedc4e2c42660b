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

// Shared helpers for the test binaries: scratch directories and a generated
// corpus whose three classes use disjoint vocabularies.

#include <filesystem>
#include <string>
#include <vector>

#include "ouvls/corpus.hpp"
#include "ouvls/harness.hpp"
#include "ouvls/rng.hpp"

namespace ouvls::testing {

inline std::filesystem::path data_dir() { return OUVLS_TEST_DATA_DIR; }

/// Fresh, empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("ouvls_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Lowercase letters only, unique per (cls, index).
inline std::string toy_word(int cls, int index) {
  std::string w(1, static_cast<char>('a' + cls));
  w += "w";
  do {
    w.push_back(static_cast<char>('a' + index % 26));
    index /= 26;
  } while (index > 0);
  return w;
}

struct ToySpec {
  int classes = 3;
  int train_per_class = 100;
  int valid_per_class = 20;
  int test_per_class = 20;
  int words_per_class = 20;
  int sentence_length = 10;
  int sd_per_class = 10;
  std::uint64_t seed = 7;
};

/// Writes train/valid/test/sd/sites jsonl for a separable toy problem on
/// criteria 1..classes. Sites cover every criterion so the prior exists.
inline Corpus write_toy_dataset(const std::filesystem::path& dir, const ToySpec& spec = {}) {
  Rng rng(spec.seed);
  Corpus c;
  std::vector<SiteRecord> sites;
  // Site 10+c holds criterion c alone; site 20+c pairs c with its neighbour.
  for (int cls = 1; cls <= spec.classes; ++cls) {
    SiteRecord solo;
    solo.site_id = 10 + cls;
    solo.name = "solo " + std::to_string(cls);
    solo.criteria = {CriterionId(cls)};
    sites.push_back(solo);
    SiteRecord pair;
    pair.site_id = 20 + cls;
    pair.name = "pair " + std::to_string(cls);
    pair.criteria = {CriterionId(cls), CriterionId(cls % spec.classes + 1)};
    sites.push_back(pair);
  }
  for (int k = spec.classes + 1; k <= kNumCriteria; ++k) {
    SiteRecord extra;
    extra.site_id = 100 + k;
    extra.name = "extra " + std::to_string(k);
    extra.criteria = {CriterionId(k)};
    sites.push_back(extra);
  }
  auto make = [&](int cls, Split split, int i) {
    Sample s;
    for (int t = 0; t < spec.sentence_length; ++t) {
      s.tokens.push_back(toy_word(cls, static_cast<int>(rng.below(static_cast<std::size_t>(spec.words_per_class)))));
    }
    const SiteRecord& site = sites[static_cast<std::size_t>(2 * (cls - 1) + (i % 2))];
    s.parental = ParentalLabel::from_criteria(site.criteria);
    s.site_id = site.site_id;
    s.split = split;
    if (split != Split::kSd) {
      s.sentence_label = CriterionId(cls);
      s.one_hot = one_hot(CriterionId(cls));
    }
    return s;
  };
  for (int cls = 1; cls <= spec.classes; ++cls) {
    for (int i = 0; i < spec.train_per_class; ++i) c.train.push_back(make(cls, Split::kTrain, i));
    for (int i = 0; i < spec.valid_per_class; ++i) c.valid.push_back(make(cls, Split::kValid, i));
    for (int i = 0; i < spec.test_per_class; ++i) c.test.push_back(make(cls, Split::kTest, i));
    for (int i = 0; i < spec.sd_per_class; ++i) c.sd.push_back(make(cls, Split::kSd, i));
  }
  c.has_sd = spec.sd_per_class > 0;
  c.sites = sites;
  std::filesystem::create_directories(dir);
  write_samples_jsonl(dir / kTrainFile, c.train);
  write_samples_jsonl(dir / kValidFile, c.valid);
  write_samples_jsonl(dir / kTestFile, c.test);
  if (c.has_sd) write_samples_jsonl(dir / kSdFile, c.sd);
  write_sites_jsonl(dir / kSitesFile, sites);
  return c;
}

/// A small experiment config over a toy dataset; the grid holds one setting.
inline ExperimentConfig toy_config(const std::filesystem::path& dataset, const std::filesystem::path& output) {
  ExperimentConfig cfg;
  cfg.baseline = Baseline::kNgram;
  cfg.dataset = dataset;
  cfg.output = output;
  cfg.setting = default_setting(Baseline::kNgram);
  cfg.setting.train.hidden = 16;
  cfg.setting.train.batch_size = 32;
  cfg.setting.train.learning_rate = 1e-2;
  cfg.setting.train.dropout = 0.1;
  cfg.setting.train.max_epochs = 8;
  cfg.setting.train.patience = 3;
  cfg.setting.min_df = 1;
  cfg.grid = HyperGrid{};
  cfg.seeds = {0, 1};
  cfg.alpha_grid = {0.0, 0.1};
  return cfg;
}

}  // namespace ouvls::testing
