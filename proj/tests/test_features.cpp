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
#include <cmath>

#include "doctest.h"
#include "ouvls/error.hpp"
#include "ouvls/features.hpp"
#include "support.hpp"

using namespace ouvls;
using doctest::Approx;
using Tokens = std::vector<std::string>;

namespace {

TokenFrequencies freqs_of(std::initializer_list<std::pair<const char*, std::size_t>> items) {
  TokenFrequencies f;
  for (const auto& [k, v] : items) f[k] = v;
  return f;
}

const char* kVectors =
    "alpha 1 0 0 2\n"
    "beta 0 1 0 4\n"
    "gamma 0 0 1 6\n";

}  // namespace

TEST_CASE("extract_ngrams lists unigrams then bigrams") {
  CHECK(extract_ngrams(Tokens{"a", "b", "c"}) == Tokens{"a", "b", "c", "a b", "b c"});
  CHECK(extract_ngrams(Tokens{}).empty());
}

TEST_CASE("fit_tfidf keeps grams by document frequency") {
  const std::vector<Tokens> docs{{"a", "b"}, {"a", "c"}};
  const TfidfVocabulary v = fit_tfidf(docs, 2);
  REQUIRE(v.size() == 1);
  CHECK(v.grams()[0] == "a");
  CHECK(v.idf()[0] == Approx(1.0));  // present in every document
  const std::vector<Tokens> none{{"x"}, {"y"}};
  CHECK_THROWS_AS(fit_tfidf(none, 2), Error);
}

TEST_CASE("fit_tfidf and tfidf_vectorize match the frozen reference") {
  const Json fixture = read_json(testing::data_dir() / "tfidf_fixture.json");
  const Json golden = read_json(testing::data_dir() / "tfidf_golden.json");
  const auto docs = fixture.at("documents").get<std::vector<Tokens>>();
  const TfidfVocabulary v = fit_tfidf(docs, fixture.at("min_df").get<int>());
  CHECK(v.grams() == golden.at("grams").get<Tokens>());
  const auto idf = golden.at("idf").get<std::vector<double>>();
  REQUIRE(v.idf().size() == idf.size());
  for (std::size_t i = 0; i < idf.size(); ++i) CHECK(v.idf()[i] == Approx(idf[i]).epsilon(1e-12));
  const SparseVector x = tfidf_vectorize(v, fixture.at("query").get<Tokens>());
  const auto idx = golden.at("query_indices").get<std::vector<std::uint32_t>>();
  const auto val = golden.at("query_values").get<std::vector<double>>();
  CHECK(x.indices == idx);
  REQUIRE(x.values.size() == val.size());
  for (std::size_t i = 0; i < val.size(); ++i) CHECK(x.values[i] == Approx(val[i]).epsilon(1e-12));
}

TEST_CASE("tfidf_vectorize zero and single-spike cases") {
  const std::vector<Tokens> docs{{"a", "b"}, {"a", "c"}, {"b", "d"}};
  const TfidfVocabulary v = fit_tfidf(docs, 1);
  const SparseVector zero = tfidf_vectorize(v, Tokens{"zzz", "qqq"});
  CHECK(zero.nnz() == 0);
  CHECK(zero.dimension == v.size());
  const SparseVector one = tfidf_vectorize(v, Tokens{"d"});
  REQUIRE(one.nnz() == 1);
  CHECK(one.values[0] == Approx(1.0));
  CHECK(one.indices[0] == *v.index_of("d"));
}

TEST_CASE("tfidf vectors are unit length on a corpus") {
  testing::ToySpec spec;
  const auto dir = testing::scratch_dir("features_norm");
  const Corpus c = testing::write_toy_dataset(dir, spec);
  const TfidfVocabulary v = fit_tfidf(std::span<const Sample>(c.train), 2);
  for (const auto* split : {&c.train, &c.valid, &c.test}) {
    for (const Sample& s : *split) {
      const SparseVector x = tfidf_vectorize(v, s.tokens);
      if (x.nnz() > 0) CHECK(x.norm() == Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("fitting on train only: adding held-out text changes idf") {
  const auto dir = testing::scratch_dir("features_hygiene");
  const Corpus c = testing::write_toy_dataset(dir);
  const TfidfVocabulary train_only = fit_tfidf(std::span<const Sample>(c.train), 1);
  std::vector<Sample> all = c.train;
  all.insert(all.end(), c.valid.begin(), c.valid.end());
  const TfidfVocabulary widened = fit_tfidf(std::span<const Sample>(all), 1);
  CHECK(train_only.idf() != widened.idf());
}

TEST_CASE("vocabulary JSON round trip") {
  const std::vector<Tokens> docs{{"a", "b"}, {"a", "c"}};
  const TfidfVocabulary v = fit_tfidf(docs, 1);
  const Json doc = v.to_json();
  CHECK(doc.contains("grams"));
  CHECK(doc.contains("idf"));
  CHECK(doc.at("min_df") == 1);
  const TfidfVocabulary back = TfidfVocabulary::from_json(doc);
  CHECK(back.grams() == v.grams());
  CHECK(back.idf() == v.idf());
}

TEST_CASE("load_embeddings keeps frequent tokens and adds a mean unknown") {
  EmbeddingLoadReport rep;
  const auto t = load_embeddings_text(kVectors, 1, freqs_of({{"alpha", 3}, {"beta", 1}, {"gamma", 1}}), &rep);
  CHECK(t.size() == 4);
  CHECK(t.dimension() == 4);
  CHECK(rep.kept == 3);
  const auto unk = t.unk();
  const std::vector<double> mean{1.0 / 3, 1.0 / 3, 1.0 / 3, 4.0};
  for (int d = 0; d < 4; ++d) CHECK(unk[d] == Approx(mean[d]).epsilon(1e-15));

  const auto cut = load_embeddings_text(kVectors, 2, freqs_of({{"alpha", 3}, {"beta", 1}}));
  CHECK(cut.contains("alpha"));
  CHECK_FALSE(cut.contains("beta"));
  CHECK_FALSE(cut.contains("gamma"));  // absent from the training vocabulary
  CHECK(cut.lookup("beta")[0] == cut.unk()[0]);
}

TEST_CASE("load_embeddings error handling") {
  CHECK_THROWS_AS(load_embeddings_text("a 1 2\nb 1 2 3\n", 0, {}), Error);
  EmbeddingLoadReport rep;
  const auto t = load_embeddings_text("2 2\na 1 2\nb x y\nnovector\nc 3 4\n", 0, {}, &rep);
  CHECK(t.size() == 3);
  CHECK(rep.errors.size() == 2);
}

TEST_CASE("boe_embed averages token vectors") {
  const auto t = load_embeddings_text(kVectors, 0, {});
  const auto one = boe_embed(Tokens{"alpha"}, t);
  CHECK(one == std::vector<double>{1, 0, 0, 2});
  const auto two = boe_embed(Tokens{"alpha", "beta"}, t);
  CHECK(two == std::vector<double>{0.5, 0.5, 0, 3});
  const auto unknown = boe_embed(Tokens{"zz", "yy"}, t);
  for (int d = 0; d < 4; ++d) CHECK(unknown[d] == Approx(t.unk()[d]).epsilon(1e-15));
  CHECK_THROWS_AS(boe_embed(Tokens{}, t), Error);
  Tokens seq{"gamma", "alpha", "zz", "beta"};
  const auto base = boe_embed(seq, t);
  std::sort(seq.begin(), seq.end());
  do {
    const auto perm = boe_embed(seq, t);
    for (int d = 0; d < 4; ++d) CHECK(perm[d] == Approx(base[d]).epsilon(1e-15));
  } while (std::next_permutation(seq.begin(), seq.end()));
}

TEST_CASE("featurizers persist with a verified content hash") {
  const auto dir = testing::scratch_dir("featurizer_save");
  const std::vector<Tokens> docs{{"a", "b"}, {"a", "c"}};
  const Featurizer f(fit_tfidf(docs, 1));
  const FeaturizerRef ref = f.save(dir);
  CHECK(ref.file == "vocab.json");
  const Featurizer g = Featurizer::load(ref, dir);
  CHECK(g.featurize(Tokens{"a", "c"}) == f.featurize(Tokens{"a", "c"}));
  CHECK(FeaturizerRef::from_json(ref.to_json()) == ref);

  const Featurizer e(load_embeddings_text(kVectors, 0, {}));
  const FeaturizerRef eref = e.save(dir);
  CHECK(eref.file == "embeddings.txt");
  const Featurizer e2 = Featurizer::load(eref, dir);
  CHECK(e2.featurize(Tokens{"beta"}).to_dense() == std::vector<double>{0, 1, 0, 4});
  write_file(dir / "vocab.json", "{}");
  CHECK_THROWS_AS(Featurizer::load(ref, dir), Error);
}
