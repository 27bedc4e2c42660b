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

#include <cctype>
#include <string>
#include <vector>

#include "doctest.h"
#include "ouvls/text.hpp"
#include "ouvls/util.hpp"
#include "support.hpp"

using namespace ouvls;
using Tokens = std::vector<std::string>;

TEST_CASE("split_sentences breaks on each terminator") {
  CHECK(split_sentences("A. B? C!") == Tokens{"A.", "B?", "C!"});
}

TEST_CASE("split_sentences keeps abbreviations inside a sentence") {
  CHECK(split_sentences("It cost approx. 5 units. Done.") == Tokens{"It cost approx. 5 units.", "Done."});
  CHECK(split_sentences("Near St. Mark lies the square.") == Tokens{"Near St. Mark lies the square."});
}

TEST_CASE("split_sentences on blank or unterminated input") {
  CHECK(split_sentences("   \n\t ").empty());
  CHECK(split_sentences("no terminator here") == Tokens{"no terminator here"});
  CHECK(split_sentences("decimals 3.5 stay whole. Next") == Tokens{"decimals 3.5 stay whole.", "Next"});
}

TEST_CASE("split_sentences matches the frozen golden fixture") {
  const Json golden = read_json(testing::data_dir() / "split_golden.json");
  REQUIRE(golden.size() == 10);
  for (const Json& g : golden) {
    const std::string p = g.at("paragraph").get<std::string>();
    CAPTURE(p);
    CHECK(split_sentences(p) == g.at("sentences").get<Tokens>());
  }
}

TEST_CASE("split_sentences covers every non-whitespace character") {
  const Json golden = read_json(testing::data_dir() / "split_golden.json");
  for (const Json& g : golden) {
    const std::string p = g.at("paragraph").get<std::string>();
    std::string joined;
    for (const auto& s : split_sentences(p)) joined += s;
    auto squash = [](const std::string& s) {
      std::string out;
      for (char c : s) {
        if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
      }
      return out;
    };
    CHECK(squash(joined) == squash(p));
  }
}

TEST_CASE("preprocess folds case, accents and numbers") {
  CHECK(preprocess("The Counter Reformation of the late 16 th century") ==
        Tokens{"the", "counter", "reformation", "of", "the", "late", "<num>", "th", "century"});
  CHECK(preprocess("Château 3") == Tokens{"chateau", "<num>"});
  CHECK(preprocess("the 16th century") == Tokens{"the", "<num>", "th", "century"});
  CHECK(preprocess("about 1,234.5 ha.") == Tokens{"about", "<num>", "ha", "."});
  CHECK(preprocess("“quoted”") == Tokens{"\"", "quoted", "\""});
}

TEST_CASE("preprocess matches the frozen 20-sentence golden fixture") {
  const Json golden = read_json(testing::data_dir() / "token_golden.json");
  REQUIRE(golden.size() == 20);
  for (const Json& g : golden) {
    const std::string s = g.at("sentence").get<std::string>();
    CAPTURE(s);
    CHECK(preprocess(s) == g.at("tokens").get<Tokens>());
  }
}

TEST_CASE("preprocess is idempotent and leaves no uppercase or digits") {
  const Json golden = read_json(testing::data_dir() / "token_golden.json");
  for (const Json& g : golden) {
    const Tokens once = preprocess(g.at("sentence").get<std::string>());
    CHECK(preprocess(join_tokens(once)) == once);
    for (const auto& t : once) {
      if (t == kNumToken) continue;
      for (char c : t) {
        CHECK_FALSE(std::isupper(static_cast<unsigned char>(c)));
        CHECK_FALSE(std::isdigit(static_cast<unsigned char>(c)));
      }
    }
  }
}

TEST_CASE("fold_text and markup helpers") {
  CHECK(fold_text("ÉCOLE Große") == "ecole große");
  CHECK(is_valid_utf8("plain ascii"));
  CHECK_FALSE(is_valid_utf8(std::string("bad \xff byte")));
  CHECK(strip_markup("<p>Tom &amp; Jerry</p>\n<br/>  &#233;t&#xE9;") == "Tom & Jerry été");
  CHECK(strip_markup("a < b and c > d") == "a < b and c > d");
}
