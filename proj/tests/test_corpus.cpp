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

#include <set>
#include <string>

#include "doctest.h"
#include "ouvls/corpus.hpp"
#include "ouvls/error.hpp"
#include "ouvls/text.hpp"
#include "support.hpp"

using namespace ouvls;

namespace {

CriteriaSet crit(std::initializer_list<int> ids) {
  CriteriaSet s;
  for (int i : ids) s.insert(CriterionId(i));
  return s;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

// Ten sites with one ten-sentence paragraph each; every sentence has 20 tokens.
std::vector<SiteRecord> round_sites() {
  std::vector<SiteRecord> sites;
  for (int s = 0; s < 10; ++s) {
    SiteRecord r;
    r.site_id = s + 1;
    r.name = "site";
    const int k = s % 10 + 1;
    r.criteria = crit({k});
    std::string para;
    for (int j = 0; j < 10; ++j) {
      para += "Sentence";
      for (int w = 0; w < 18; ++w) para += " " + testing::toy_word(s, j * 18 + w);
      para += ". ";
    }
    r.justification[CriterionId(k)] = para;
    sites.push_back(r);
  }
  return sites;
}

}  // namespace

TEST_CASE("CriterionId and ParentalLabel invariants") {
  CHECK_THROWS_AS(CriterionId(0), Error);
  CHECK_THROWS_AS(CriterionId(12), Error);
  CHECK(CriterionId(11).is_others());
  CHECK(parse_criterion("iv") == CriterionId(4));
  CHECK(parse_criterion("10") == CriterionId(10));
  CHECK_FALSE(parse_criterion("xi").has_value());
  const ParentalLabel p = ParentalLabel::from_criteria(crit({2, 4}));
  CHECK(p.values()[1] == 1.0);
  CHECK(p.values()[3] == 1.0);
  CHECK(p.values()[10] == 0.2);
  CHECK(p.criteria() == crit({2, 4}));
  LabelVector bad{};
  bad[10] = 0.2;
  CHECK_THROWS_AS(ParentalLabel::from_values(bad), Error);  // no criterion set
  bad[0] = 0.5;
  CHECK_THROWS_AS(ParentalLabel::from_values(bad), Error);  // not 0/1
}

TEST_CASE("parse_syndication reads the three-row fixture") {
  const SyndicationTable t = parse_syndication(testing::data_dir() / "syndication_fixture.csv");
  CHECK(t.errors.empty());
  REQUIRE(t.sites.size() == 3);
  CHECK(t.sites[0].site_id == 394);
  CHECK(t.sites[0].criteria == crit({1, 2, 3, 4, 5, 6}));
  CHECK(t.sites[0].justification.size() == 6);
  CHECK(t.sites[0].justification.at(CriterionId(2)) ==
        "The influence of Venice on the development of architecture and monumental arts was considerable.");
  CHECK(t.sites[1].site_id == 1000);
  CHECK(t.sites[1].criteria == crit({7, 10}));
  CHECK(t.sites[1].justification.size() == 2);
  CHECK(t.sites[2].site_id == 2000);
  CHECK(t.sites[2].criteria == crit({3}));
  CHECK_FALSE(t.sites[2].has_justification());
  CHECK_FALSE(t.sites[2].short_description.empty());
}

TEST_CASE("parse_syndication collects row errors and keeps going") {
  const std::string csv =
      "id_no,name_en,criteria_txt,justification_en,short_description_en\n"
      "1,Good,(ii),\"Criterion (ii): Some text here that is fine.\",desc\n"
      "2,Short row,(ii)\n"
      "x,Bad id,(ii),text,desc\n"
      "4,No criteria,,text,desc\n"
      "1,Duplicate,(ii),text,desc\n"
      "6,Wrong criterion,(ii),\"Criterion (iv): Not this site's criterion.\",desc\n";
  const SyndicationTable t = parse_syndication_text(csv);
  REQUIRE(t.sites.size() == 2);
  CHECK(t.sites[0].site_id == 1);
  CHECK(t.sites[1].site_id == 6);
  CHECK_FALSE(t.sites[1].has_justification());
  CHECK(t.errors.size() == 5);
  CHECK(t.errors[0].line == 3);
}

TEST_CASE("parse_syndication rejects a table without required columns") {
  CHECK(code_of([] { parse_syndication_text("id_no,name_en\n1,x\n"); }) == ErrorCode::kConfig);
  CHECK(code_of([] { parse_csv("a,b\n\"open,c\n"); }) == ErrorCode::kFormat);
}

TEST_CASE("split_justification separates single and joint markers") {
  const auto s = split_justification(
      "Intro. Criterion (ii): first part. Criteria (iii) and (iv): joint part. Criterion (ii): more.");
  REQUIRE(s.by_criterion.size() == 1);
  CHECK(s.by_criterion.at(CriterionId(2)) == "first part. more.");
  REQUIRE(s.shared.size() == 1);
  CHECK(s.shared[0] == "joint part.");
}

TEST_CASE("build_dataset partitions 100 sentences 80/10/10 plus definitions") {
  const auto sites = round_sites();
  const DatasetSplits d = build_dataset(sites, builtin_definitions(), 1337);
  CHECK(d.valid.size() == 10);
  CHECK(d.test.size() == 10);
  CHECK(d.train.size() == 80 + 10);
  int defs = 0;
  for (const Sample& s : d.train) defs += s.site_id == 0 ? 1 : 0;
  CHECK(defs == 10);
  for (const auto* split : {&d.train, &d.valid, &d.test}) {
    for (const Sample& s : *split) CHECK_NOTHROW(validate_sample(s));
  }
}

TEST_CASE("build_dataset is a pure function of its inputs") {
  const auto sites = round_sites();
  const DatasetSplits a = build_dataset(sites, builtin_definitions(), 42);
  const DatasetSplits b = build_dataset(sites, builtin_definitions(), 42);
  CHECK(a.train == b.train);
  CHECK(a.valid == b.valid);
  CHECK(a.test == b.test);
  const DatasetSplits c = build_dataset(sites, builtin_definitions(), 43);
  CHECK_FALSE(c.valid == a.valid);
}

TEST_CASE("build_dataset rejects incomplete definitions and empty splits") {
  auto defs = builtin_definitions();
  defs.erase(CriterionId(5));
  CHECK(code_of([&] { build_dataset(round_sites(), defs, 1); }) == ErrorCode::kConfig);
  auto few = round_sites();
  few.resize(0);
  CHECK(code_of([&] { build_dataset(few, builtin_definitions(), 1); }) == ErrorCode::kConfig);
}

TEST_CASE("build_sd_set carries only parental labels") {
  SiteRecord site;
  site.site_id = 9;
  site.criteria = crit({2, 4});
  site.short_description = "First sentence here. Second one follows. Third and last.";
  const auto sd = build_sd_set(std::span<const SiteRecord>(&site, 1));
  REQUIRE(sd.size() == 3);
  for (const Sample& s : sd) {
    CHECK_FALSE(s.sentence_label.has_value());
    CHECK(s.split == Split::kSd);
    CHECK(s.parental.values()[1] == 1.0);
    CHECK(s.parental.values()[3] == 1.0);
    CHECK(s.parental.values()[10] == 0.2);
  }
  site.short_description.clear();
  CHECK(build_sd_set(std::span<const SiteRecord>(&site, 1)).empty());
}

TEST_CASE("samples and sites survive a JSONL round trip") {
  const auto dir = testing::scratch_dir("corpus_roundtrip");
  const DatasetSplits d = build_dataset(round_sites(), builtin_definitions(), 5);
  write_samples_jsonl(dir / "train.jsonl", d.train);
  CHECK(read_samples_jsonl(dir / "train.jsonl") == d.train);
  const SyndicationTable t = parse_syndication(testing::data_dir() / "syndication_fixture.csv");
  write_sites_jsonl(dir / "sites.jsonl", t.sites);
  const auto back = read_sites_jsonl(dir / "sites.jsonl");
  REQUIRE(back.size() == 3);
  CHECK(back[0].criteria == t.sites[0].criteria);
  const std::string line = sample_to_json(d.train.front()).dump();
  CHECK(line.rfind("{\"tokens\":", 0) == 0);
}

TEST_CASE("custom definitions load from JSON with roman or arabic keys") {
  const auto defs = load_definitions(testing::data_dir() / "definitions_fixture.json");
  CHECK(defs.size() == 10);
  CHECK(defs.at(CriterionId(1)) == "to represent a masterpiece of human creative genius");
  CHECK(builtin_definitions().size() == 10);
}

TEST_CASE("criteria count distribution and per-class counts") {
  const SyndicationTable t = parse_syndication(testing::data_dir() / "syndication_fixture.csv");
  const auto dist = criteria_count_distribution(t.sites);
  CHECK(dist[1] == 1);
  CHECK(dist[2] == 1);
  CHECK(dist[6] == 1);
  const auto sd = build_sd_set(t.sites);
  const auto counts = per_class_counts(sd);
  CHECK(counts[0] == 2);  // two Venice description sentences
  CHECK(counts[6] == 2);
  CHECK(counts[2] == 4);  // Venice plus the mining town
}
