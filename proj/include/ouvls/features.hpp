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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "ouvls/corpus.hpp"
#include "ouvls/types.hpp"
#include "ouvls/util.hpp"

namespace ouvls {

/// Sorted-index sparse vector. Dense features are stored with every index.
struct SparseVector {
  std::size_t dimension = 0;
  std::vector<std::uint32_t> indices;
  std::vector<double> values;

  std::size_t nnz() const noexcept { return indices.size(); }
  double norm() const;
  std::vector<double> to_dense() const;
  static SparseVector from_dense(std::span<const double> dense);

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

/// 1-grams and 2-grams (adjacent tokens joined with a space), in order.
std::vector<std::string> extract_ngrams(std::span<const std::string> tokens);

class TfidfVocabulary {
 public:
  TfidfVocabulary() = default;
  TfidfVocabulary(std::vector<std::string> grams, std::vector<double> idf, int min_df);

  std::size_t size() const noexcept { return grams_.size(); }
  int min_df() const noexcept { return min_df_; }
  const std::vector<std::string>& grams() const noexcept { return grams_; }
  const std::vector<double>& idf() const noexcept { return idf_; }
  std::optional<std::size_t> index_of(const std::string& gram) const;

  Json to_json() const;
  static TfidfVocabulary from_json(const Json& doc);

 private:
  std::vector<std::string> grams_;  // lexicographic
  std::vector<double> idf_;
  int min_df_ = 1;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Vocabulary of grams with document frequency >= min_df over `documents`;
/// idf = ln((1 + N) / (1 + df)) + 1. Throws kConfig when nothing survives.
TfidfVocabulary fit_tfidf(std::span<const std::vector<std::string>> documents, int min_df);
TfidfVocabulary fit_tfidf(std::span<const Sample> train_samples, int min_df);

/// count * idf per known gram, then L2-normalized. All-OOV input gives the
/// zero vector.
SparseVector tfidf_vectorize(const TfidfVocabulary& vocab, std::span<const std::string> tokens);

inline constexpr std::string_view kUnkToken = "<unk>";

class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  /// Takes rows in the given order; "<unk>" must be among them.
  EmbeddingTable(std::size_t dimension, std::vector<std::string> tokens,
                 std::vector<double> flat_vectors);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  bool contains(const std::string& token) const { return index_.contains(token); }
  /// Vector for `token`, or the "<unk>" vector when unknown.
  std::span<const double> lookup(const std::string& token) const;
  std::span<const double> unk() const { return lookup(std::string(kUnkToken)); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  /// Standard text format, tokens sorted, shortest round-trip decimals.
  std::string to_text() const;
  /// Reads a table written by to_text() verbatim (no filtering).
  static EmbeddingTable from_text(std::string_view text);

 private:
  std::size_t dimension_ = 0;
  std::vector<std::string> tokens_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t> index_;
};

using TokenFrequencies = std::unordered_map<std::string, std::size_t>;
TokenFrequencies token_frequencies(std::span<const Sample> samples);

struct EmbeddingLoadReport {
  std::size_t lines_read = 0;
  std::size_t kept = 0;
  std::vector<RecordError> errors;
};

/// Loads "token v1 ... vD" lines, keeping tokens whose frequency in `freqs`
/// is at least `frequency_threshold`. "<unk>" is set to the mean of the kept
/// vectors. Inconsistent dimension throws kFormat; lines with unparseable
/// numbers are reported and skipped.
EmbeddingTable load_embeddings(const std::filesystem::path& path, int frequency_threshold,
                               const TokenFrequencies& freqs,
                               EmbeddingLoadReport* report = nullptr);
EmbeddingTable load_embeddings_text(std::string_view text, int frequency_threshold,
                                    const TokenFrequencies& freqs,
                                    EmbeddingLoadReport* report = nullptr);

/// Mean of token vectors. Throws kDomain on an empty sequence.
std::vector<double> boe_embed(std::span<const std::string> tokens, const EmbeddingTable& table);

enum class FeaturizerKind { kTfidf, kEmbedding };

struct FeaturizerRef {
  FeaturizerKind kind = FeaturizerKind::kTfidf;
  std::string file;  // relative to the checkpoint directory
  std::string hash;

  Json to_json() const;
  static FeaturizerRef from_json(const Json& doc);
  friend bool operator==(const FeaturizerRef&, const FeaturizerRef&) = default;
};

/// Tokens -> model input. Immutable once built; safe to share.
class Featurizer {
 public:
  explicit Featurizer(TfidfVocabulary vocab) : impl_(std::move(vocab)) {}
  explicit Featurizer(EmbeddingTable table) : impl_(std::move(table)) {}

  FeaturizerKind kind() const noexcept;
  std::size_t dimension() const noexcept;
  SparseVector featurize(std::span<const std::string> tokens) const;

  const TfidfVocabulary* vocabulary() const { return std::get_if<TfidfVocabulary>(&impl_); }
  const EmbeddingTable* embeddings() const { return std::get_if<EmbeddingTable>(&impl_); }

  /// Serialized bytes: vocabulary JSON or embedding text.
  std::string serialize() const;
  std::string_view default_file_name() const;
  /// Writes into `dir` and returns the reference to record in a checkpoint.
  FeaturizerRef save(const std::filesystem::path& dir) const;
  /// Loads and verifies the content hash.
  static Featurizer load(const FeaturizerRef& ref, const std::filesystem::path& dir);

 private:
  std::variant<TfidfVocabulary, EmbeddingTable> impl_;
};

}  // namespace ouvls
