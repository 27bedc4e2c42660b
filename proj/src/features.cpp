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

#include "ouvls/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>

#include "ouvls/error.hpp"

namespace ouvls {

namespace fs = std::filesystem;

double SparseVector::norm() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

std::vector<double> SparseVector::to_dense() const {
  std::vector<double> out(dimension, 0.0);
  for (std::size_t i = 0; i < indices.size(); ++i) out[indices[i]] = values[i];
  return out;
}

SparseVector SparseVector::from_dense(std::span<const double> dense) {
  SparseVector v;
  v.dimension = dense.size();
  v.indices.resize(dense.size());
  std::iota(v.indices.begin(), v.indices.end(), 0u);
  v.values.assign(dense.begin(), dense.end());
  return v;
}

std::vector<std::string> extract_ngrams(std::span<const std::string> tokens) {
  std::vector<std::string> grams;
  grams.reserve(tokens.size() * 2);
  for (const auto& t : tokens) grams.push_back(t);
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    grams.push_back(tokens[i] + " " + tokens[i + 1]);
  }
  return grams;
}

TfidfVocabulary::TfidfVocabulary(std::vector<std::string> grams, std::vector<double> idf,
                                 int min_df)
    : grams_(std::move(grams)), idf_(std::move(idf)), min_df_(min_df) {
  if (grams_.size() != idf_.size()) throw_format("vocabulary grams and idf differ in length");
  for (std::size_t i = 0; i < grams_.size(); ++i) {
    if (!(std::isfinite(idf_[i]) && idf_[i] > 0.0)) throw_format("idf must be finite and positive");
    if (!index_.emplace(grams_[i], i).second) throw_format("duplicate gram '" + grams_[i] + "'");
  }
}

std::optional<std::size_t> TfidfVocabulary::index_of(const std::string& gram) const {
  auto it = index_.find(gram);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Json TfidfVocabulary::to_json() const {
  Json doc;
  doc["grams"] = grams_;
  doc["idf"] = idf_;
  doc["min_df"] = min_df_;
  return doc;
}

TfidfVocabulary TfidfVocabulary::from_json(const Json& doc) {
  try {
    return TfidfVocabulary(doc.at("grams").get<std::vector<std::string>>(),
                           doc.at("idf").get<std::vector<double>>(), doc.at("min_df").get<int>());
  } catch (const Json::exception& e) {
    throw_format(std::string("bad vocabulary document: ") + e.what());
  }
}

TfidfVocabulary fit_tfidf(std::span<const std::vector<std::string>> documents, int min_df) {
  if (documents.empty()) throw_config("cannot fit a vocabulary on zero documents");
  if (min_df < 1) throw_config("min_df must be at least 1");
  std::map<std::string, std::size_t> df;
  for (const auto& doc : documents) {
    std::vector<std::string> grams = extract_ngrams(doc);
    std::sort(grams.begin(), grams.end());
    grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
    for (auto& g : grams) ++df[std::move(g)];
  }
  const double n = static_cast<double>(documents.size());
  std::vector<std::string> grams;
  std::vector<double> idf;
  for (const auto& [gram, count] : df) {
    if (count < static_cast<std::size_t>(min_df)) continue;
    grams.push_back(gram);
    idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  if (grams.empty()) throw_config("vocabulary is empty after min_df filtering");
  return TfidfVocabulary(std::move(grams), std::move(idf), min_df);
}

TfidfVocabulary fit_tfidf(std::span<const Sample> train_samples, int min_df) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(train_samples.size());
  for (const Sample& s : train_samples) docs.push_back(s.tokens);
  return fit_tfidf(std::span<const std::vector<std::string>>(docs), min_df);
}

SparseVector tfidf_vectorize(const TfidfVocabulary& vocab, std::span<const std::string> tokens) {
  std::map<std::uint32_t, double> counts;
  for (const std::string& g : extract_ngrams(tokens)) {
    if (auto idx = vocab.index_of(g)) counts[static_cast<std::uint32_t>(*idx)] += 1.0;
  }
  SparseVector v;
  v.dimension = vocab.size();
  double sq = 0.0;
  for (auto& [idx, c] : counts) {
    const double w = c * vocab.idf()[idx];
    v.indices.push_back(idx);
    v.values.push_back(w);
    sq += w * w;
  }
  if (sq > 0.0) {
    const double inv = 1.0 / std::sqrt(sq);
    for (double& w : v.values) w *= inv;
  }
  return v;
}

EmbeddingTable::EmbeddingTable(std::size_t dimension, std::vector<std::string> tokens,
                               std::vector<double> flat_vectors)
    : dimension_(dimension), tokens_(std::move(tokens)), data_(std::move(flat_vectors)) {
  if (dimension_ == 0) throw_format("embedding dimension must be positive");
  if (data_.size() != tokens_.size() * dimension_) throw_format("embedding data size mismatch");
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], i).second) throw_format("duplicate token '" + tokens_[i] + "'");
  }
  if (!index_.contains(std::string(kUnkToken))) throw_format("embedding table lacks <unk>");
}

std::span<const double> EmbeddingTable::lookup(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) it = index_.find(std::string(kUnkToken));
  return std::span<const double>(data_).subspan(it->second * dimension_, dimension_);
}

std::string EmbeddingTable::to_text() const {
  std::vector<std::size_t> order(tokens_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return tokens_[a] < tokens_[b]; });
  std::string out;
  for (std::size_t i : order) {
    out += tokens_[i];
    for (std::size_t d = 0; d < dimension_; ++d) {
      out.push_back(' ');
      out += format_double(data_[i * dimension_ + d]);
    }
    out.push_back('\n');
  }
  return out;
}

namespace {

bool parse_doubles(std::string_view rest, std::vector<double>& out) {
  out.clear();
  const char* p = rest.data();
  const char* end = rest.data() + rest.size();
  while (p < end) {
    while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
    if (p >= end) break;
    double v = 0.0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc() || !std::isfinite(v)) return false;
    if (next < end && *next != ' ' && *next != '\t' && *next != '\r') return false;
    out.push_back(v);
    p = next;
  }
  return true;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t start = 0;
  std::size_t lineno = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    ++lineno;
    fn(lineno, text.substr(start, nl - start));
    start = nl + 1;
  }
}

}  // namespace

EmbeddingTable EmbeddingTable::from_text(std::string_view text) {
  std::size_t dim = 0;
  std::vector<std::string> tokens;
  std::vector<double> data;
  std::vector<double> row;
  for_each_line(text, [&](std::size_t lineno, std::string_view line) {
    if (line.empty()) return;
    const auto sp = line.find(' ');
    if (sp == std::string_view::npos || !parse_doubles(line.substr(sp + 1), row)) {
      throw_format("embedding line " + std::to_string(lineno) + " is malformed");
    }
    if (dim == 0) dim = row.size();
    if (row.size() != dim) throw_format("inconsistent embedding dimension at line " + std::to_string(lineno));
    tokens.emplace_back(line.substr(0, sp));
    data.insert(data.end(), row.begin(), row.end());
  });
  return EmbeddingTable(dim, std::move(tokens), std::move(data));
}

TokenFrequencies token_frequencies(std::span<const Sample> samples) {
  TokenFrequencies freqs;
  for (const Sample& s : samples) {
    for (const auto& t : s.tokens) ++freqs[t];
  }
  return freqs;
}

EmbeddingTable load_embeddings_text(std::string_view text, int frequency_threshold,
                                    const TokenFrequencies& freqs, EmbeddingLoadReport* report) {
  EmbeddingLoadReport local;
  EmbeddingLoadReport& rep = report ? *report : local;
  std::size_t dim = 0;
  std::vector<std::string> tokens;
  std::vector<double> data;
  std::vector<double> row;
  std::unordered_map<std::string, bool> seen;
  const auto threshold = static_cast<std::size_t>(std::max(frequency_threshold, 0));

  for_each_line(text, [&](std::size_t lineno, std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) return;
    ++rep.lines_read;
    const auto sp = line.find(' ');
    if (sp == std::string_view::npos || sp == 0) {
      rep.errors.push_back({lineno, 0, "no vector on line"});
      return;
    }
    std::string token(line.substr(0, sp));
    // word2vec-style "count dim" header
    if (lineno == 1 && parse_doubles(line, row) && row.size() == 2) return;
    if (token == kUnkToken) return;
    if (threshold > 0) {
      auto it = freqs.find(token);
      if (it == freqs.end() || it->second < threshold) return;
    }
    if (seen.contains(token)) return;
    if (!parse_doubles(line.substr(sp + 1), row) || row.empty()) {
      rep.errors.push_back({lineno, 0, "unparseable vector for '" + token + "'"});
      return;
    }
    if (dim == 0) dim = row.size();
    if (row.size() != dim) {
      throw_format("inconsistent embedding dimension at line " + std::to_string(lineno) +
                   ": expected " + std::to_string(dim) + ", found " + std::to_string(row.size()));
    }
    seen.emplace(token, true);
    tokens.push_back(std::move(token));
    data.insert(data.end(), row.begin(), row.end());
  });
  if (tokens.empty()) throw_format("no embedding vectors were kept");
  rep.kept = tokens.size();

  std::vector<double> mean(dim, 0.0);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (std::size_t d = 0; d < dim; ++d) mean[d] += data[i * dim + d];
  }
  for (double& m : mean) m /= static_cast<double>(tokens.size());
  tokens.emplace_back(kUnkToken);
  data.insert(data.end(), mean.begin(), mean.end());
  return EmbeddingTable(dim, std::move(tokens), std::move(data));
}

EmbeddingTable load_embeddings(const fs::path& path, int frequency_threshold,
                               const TokenFrequencies& freqs, EmbeddingLoadReport* report) {
  return load_embeddings_text(read_file(path), frequency_threshold, freqs, report);
}

std::vector<double> boe_embed(std::span<const std::string> tokens, const EmbeddingTable& table) {
  if (tokens.empty()) throw_domain("cannot embed an empty token sequence");
  std::vector<double> out(table.dimension(), 0.0);
  for (const auto& t : tokens) {
    auto v = table.lookup(t);
    for (std::size_t d = 0; d < out.size(); ++d) out[d] += v[d];
  }
  const double n = static_cast<double>(tokens.size());
  for (double& x : out) x /= n;
  return out;
}

Json FeaturizerRef::to_json() const {
  Json doc;
  doc["kind"] = kind == FeaturizerKind::kTfidf ? "tfidf" : "embedding";
  doc["file"] = file;
  doc["hash"] = hash;
  return doc;
}

FeaturizerRef FeaturizerRef::from_json(const Json& doc) {
  try {
    FeaturizerRef ref;
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "tfidf") ref.kind = FeaturizerKind::kTfidf;
    else if (kind == "embedding") ref.kind = FeaturizerKind::kEmbedding;
    else throw_format("unknown featurizer kind '" + kind + "'");
    ref.file = doc.at("file").get<std::string>();
    ref.hash = doc.at("hash").get<std::string>();
    return ref;
  } catch (const Json::exception& e) {
    throw_format(std::string("bad featurizer reference: ") + e.what());
  }
}

FeaturizerKind Featurizer::kind() const noexcept {
  return std::holds_alternative<TfidfVocabulary>(impl_) ? FeaturizerKind::kTfidf
                                                        : FeaturizerKind::kEmbedding;
}

std::size_t Featurizer::dimension() const noexcept {
  if (auto* v = vocabulary()) return v->size();
  return embeddings()->dimension();
}

SparseVector Featurizer::featurize(std::span<const std::string> tokens) const {
  if (auto* v = vocabulary()) return tfidf_vectorize(*v, tokens);
  const auto dense = boe_embed(tokens, *embeddings());
  return SparseVector::from_dense(dense);
}

std::string Featurizer::serialize() const {
  if (auto* v = vocabulary()) return v->to_json().dump() + "\n";
  return embeddings()->to_text();
}

std::string_view Featurizer::default_file_name() const {
  return kind() == FeaturizerKind::kTfidf ? "vocab.json" : "embeddings.txt";
}

FeaturizerRef Featurizer::save(const fs::path& dir) const {
  const std::string bytes = serialize();
  FeaturizerRef ref;
  ref.kind = kind();
  ref.file = std::string(default_file_name());
  ref.hash = content_hash(bytes);
  write_file(dir / ref.file, bytes);
  return ref;
}

Featurizer Featurizer::load(const FeaturizerRef& ref, const fs::path& dir) {
  const std::string bytes = read_file(dir / ref.file);
  if (content_hash(bytes) != ref.hash) {
    throw_format("featurizer file " + (dir / ref.file).string() + " does not match its recorded hash");
  }
  if (ref.kind == FeaturizerKind::kTfidf) {
    try {
      return Featurizer(TfidfVocabulary::from_json(Json::parse(bytes)));
    } catch (const Json::parse_error& e) {
      throw_format(std::string("bad vocabulary file: ") + e.what());
    }
  }
  return Featurizer(EmbeddingTable::from_text(bytes));
}

}  // namespace ouvls
