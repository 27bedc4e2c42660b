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
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ouvls/types.hpp"
#include "ouvls/util.hpp"

namespace ouvls {

// ---------------------------------------------------------------------------
// CSV (RFC 4180)
// ---------------------------------------------------------------------------

struct CsvRow {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

/// Splits `text` into records. Quoted fields may contain commas, doubled
/// quotes and line breaks. A stray quote inside an unquoted field or an
/// unterminated quoted field throws kFormat naming the line.
std::vector<CsvRow> parse_csv(std::string_view text);

// ---------------------------------------------------------------------------
// Syndication export
// ---------------------------------------------------------------------------

struct RecordError {
  std::size_t line = 0;
  int site_id = 0;  // 0 when unknown
  std::string message;
};

struct SyndicationTable {
  /// Every usable row, in file order. Rows without justification text are
  /// kept for the SD set and for the co-occurrence prior.
  std::vector<SiteRecord> sites;
  std::vector<RecordError> errors;
};

/// Reads the syndication export.
///
/// Recognised columns (header names are case-insensitive):
///   site id            `id_no` | `site_id` | `id` | `unique_number`
///   name               `name_en` | `name`
///   short description  `short_description_en` | `short_description`
///   criteria           `criteria_txt` | `criteria` (e.g. "(i)(ii)(iv)"),
///                      or flag columns `c1`..`c6`,`n7`..`n10` /
///                      `criterion_1`..`criterion_10`
///   justification      per-criterion `justification_1`..`justification_10`
///                      (or `justification_i`..`justification_x`), or one
///                      `justification_en` | `justification` column whose
///                      paragraphs are introduced by "Criterion (iv):"
///
/// A missing required column throws kConfig. Malformed rows are reported in
/// `errors` and skipped; parsing continues.
SyndicationTable parse_syndication(const std::filesystem::path& path);
SyndicationTable parse_syndication_text(std::string_view csv_text);

/// Splits a single justification field on "Criterion (x)" markers. Text
/// before the first marker is ignored. Paragraphs headed by a marker naming
/// several criteria ("Criteria (ii) and (iv)") are returned under `shared`.
struct JustificationSections {
  std::map<CriterionId, std::string> by_criterion;
  std::vector<std::string> shared;
};
JustificationSections split_justification(std::string_view text);

// ---------------------------------------------------------------------------
// Dataset construction
// ---------------------------------------------------------------------------

using CriterionDefinitions = std::map<CriterionId, std::string>;

/// The official one-sentence definitions of criteria (i) - (x).
const CriterionDefinitions& builtin_definitions();
/// JSON object {"1": "...", ..., "10": "..."}; keys may also be roman.
CriterionDefinitions load_definitions(const std::filesystem::path& path);

struct DatasetSplits {
  std::vector<Sample> train;
  std::vector<Sample> valid;
  std::vector<Sample> test;
};

/// Sentence samples from a single justification paragraph, after the
/// length filter. Split is left as kTrain.
std::vector<Sample> paragraph_samples(const SiteRecord& site,
                                      CriterionId criterion);

/// Shuffles all justification sentences with `seed` and assigns
/// floor(N/10) to valid, floor(N/10) to test and the rest to train; the ten
/// definition sentences are then appended to train. Within each split,
/// samples keep corpus order.
DatasetSplits build_dataset(std::span<const SiteRecord> sites,
                            const CriterionDefinitions& definitions,
                            std::uint64_t seed);

/// Short-description sentences labelled only with the site's parental label.
std::vector<Sample> build_sd_set(std::span<const SiteRecord> sites);

/// Per-class counts of samples containing each criterion: by sentence label
/// for labelled splits, by parental criteria for sd.
std::array<std::size_t, kNumCriteria> per_class_counts(
    std::span<const Sample> samples);

/// Entry n (1..10) counts sites justified under exactly n criteria.
std::array<std::size_t, kNumCriteria + 1> criteria_count_distribution(
    std::span<const SiteRecord> sites);

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

Json sample_to_json(const Sample& sample);
Sample sample_from_json(const Json& row);

void write_samples_jsonl(const std::filesystem::path& path,
                         std::span<const Sample> samples);
std::vector<Sample> read_samples_jsonl(const std::filesystem::path& path);

/// Site criteria only (texts are not persisted): one JSON object per line
/// {site_id, name, criteria, has_justification}.
void write_sites_jsonl(const std::filesystem::path& path,
                       std::span<const SiteRecord> sites);
std::vector<SiteRecord> read_sites_jsonl(const std::filesystem::path& path);

/// A dataset directory as written by `ingest`.
struct Corpus {
  std::vector<Sample> train;
  std::vector<Sample> valid;
  std::vector<Sample> test;
  std::vector<Sample> sd;       // empty when sd.jsonl is absent
  bool has_sd = false;
  std::vector<SiteRecord> sites;  // empty when sites.jsonl is absent

  const std::vector<Sample>& split(Split which) const;
};

inline constexpr std::string_view kTrainFile = "train.jsonl";
inline constexpr std::string_view kValidFile = "valid.jsonl";
inline constexpr std::string_view kTestFile = "test.jsonl";
inline constexpr std::string_view kSdFile = "sd.jsonl";
inline constexpr std::string_view kSitesFile = "sites.jsonl";

Corpus load_corpus(const std::filesystem::path& dir);
/// Hash over the split files present in `dir`, for manifests.
std::string corpus_hash(const std::filesystem::path& dir);

}  // namespace ouvls
