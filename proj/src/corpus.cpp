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

#include "ouvls/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <unordered_map>

#include "ouvls/error.hpp"
#include "ouvls/rng.hpp"
#include "ouvls/text.hpp"

namespace ouvls {

namespace fs = std::filesystem;

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim_ascii(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool truthy(std::string_view v) {
  const std::string s = lower(trim_ascii(v));
  return s == "1" || s == "true" || s == "yes" || s == "y" || s == "x";
}

struct ColumnMap {
  std::unordered_map<std::string, std::size_t> index;

  std::optional<std::size_t> find_any(std::initializer_list<std::string_view> names) const {
    for (auto name : names) {
      auto it = index.find(std::string(name));
      if (it != index.end()) return it->second;
    }
    return std::nullopt;
  }
};

// One column per criterion, or none.
std::optional<std::array<std::size_t, kNumCriteria>> per_criterion_columns(
    const ColumnMap& cols, const std::vector<std::string>& templates) {
  std::array<std::size_t, kNumCriteria> out{};
  bool any = false;
  bool all = true;
  for (int k = 1; k <= kNumCriteria; ++k) {
    const std::string roman(criterion_roman(CriterionId(k)));
    std::optional<std::size_t> col;
    for (const auto& t : templates) {
      std::string name = t;
      const auto pos = name.find('#');
      std::string arabic = name;
      arabic.replace(pos, 1, std::to_string(k));
      std::string rom = name;
      rom.replace(pos, 1, roman);
      col = cols.find_any({arabic, rom});
      if (col) break;
    }
    if (col) {
      out[k - 1] = *col;
      any = true;
    } else {
      all = false;
    }
  }
  if (!any) return std::nullopt;
  if (!all) throw_config("incomplete set of per-criterion columns");
  return out;
}

std::optional<std::array<std::size_t, kNumCriteria>> flag_columns(const ColumnMap& cols) {
  // c1..c6 / n7..n10, as used in the published table headings
  std::array<std::size_t, kNumCriteria> out{};
  bool all = true;
  for (int k = 1; k <= kNumCriteria; ++k) {
    const std::string name = (k <= 6 ? "c" : "n") + std::to_string(k);
    auto col = cols.find_any({name});
    if (!col) {
      all = false;
      break;
    }
    out[k - 1] = *col;
  }
  if (all) return out;
  return per_criterion_columns(cols, {"criterion_#", "criteria_#"});
}

CriteriaSet parse_criteria_text(std::string_view text) {
  CriteriaSet out;
  static const std::regex paren(R"(\(\s*([ivxIVX]+|\d{1,2})\s*\))");
  const std::string s(text);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), paren);
       it != std::sregex_iterator(); ++it) {
    auto id = parse_criterion((*it)[1].str());
    if (!id) throw_domain("unknown criterion '" + (*it)[0].str() + "'");
    out.insert(*id);
  }
  if (!out.empty()) return out;
  std::string token;
  auto take = [&] {
    if (token.empty()) return;
    auto id = parse_criterion(token);
    if (!id) throw_domain("unknown criterion '" + token + "'");
    out.insert(*id);
    token.clear();
  };
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      token.push_back(c);
    } else {
      take();
    }
  }
  take();
  return out;
}

}  // namespace

JustificationSections split_justification(std::string_view text) {
  JustificationSections out;
  static const std::regex marker(
      R"(criteri(?:on|a)\s*((?:\(\s*[ivx]+\s*\)\s*(?:,|and|&)?\s*)+):)",
      std::regex::icase);
  static const std::regex numeral(R"(\(\s*([ivx]+)\s*\))", std::regex::icase);
  const std::string s(text);
  struct Hit {
    std::size_t begin, end;
    std::vector<CriterionId> ids;
  };
  std::vector<Hit> hits;
  for (auto it = std::sregex_iterator(s.begin(), s.end(), marker);
       it != std::sregex_iterator(); ++it) {
    Hit h{static_cast<std::size_t>(it->position(0)),
          static_cast<std::size_t>(it->position(0) + it->length(0)),
          {}};
    const std::string group = (*it)[1].str();
    for (auto n = std::sregex_iterator(group.begin(), group.end(), numeral);
         n != std::sregex_iterator(); ++n) {
      if (auto id = parse_criterion((*n)[1].str())) h.ids.push_back(*id);
    }
    if (!h.ids.empty()) hits.push_back(std::move(h));
  }
  for (std::size_t i = 0; i < hits.size(); ++i) {
    const std::size_t end = i + 1 < hits.size() ? hits[i + 1].begin : s.size();
    std::string body = strip_markup(s.substr(hits[i].end, end - hits[i].end));
    if (body.empty()) continue;
    if (hits[i].ids.size() == 1) {
      auto& slot = out.by_criterion[hits[i].ids[0]];
      slot = slot.empty() ? body : slot + " " + body;
    } else {
      out.shared.push_back(std::move(body));
    }
  }
  return out;
}

SyndicationTable parse_syndication(const fs::path& path) {
  return parse_syndication_text(read_file(path));
}

SyndicationTable parse_syndication_text(std::string_view csv_text) {
  const std::vector<CsvRow> rows = parse_csv(csv_text);
  if (rows.empty()) throw_config("syndication table has no header row");

  ColumnMap cols;
  for (std::size_t i = 0; i < rows[0].fields.size(); ++i) {
    cols.index.emplace(lower(trim_ascii(rows[0].fields[i])), i);
  }
  const auto id_col = cols.find_any({"id_no", "site_id", "id", "unique_number"});
  const auto name_col = cols.find_any({"name_en", "name"});
  const auto sd_col = cols.find_any({"short_description_en", "short_description"});
  const auto crit_text_col = cols.find_any({"criteria_txt", "criteria"});
  const auto crit_flags = flag_columns(cols);
  const auto just_cols = per_criterion_columns(cols, {"justification_#"});
  const auto just_col = cols.find_any({"justification_en", "justification"});

  if (!id_col) throw_config("missing required column: site id (id_no)");
  if (!name_col) throw_config("missing required column: name (name_en)");
  if (!sd_col) throw_config("missing required column: short_description");
  if (!crit_text_col && !crit_flags) {
    throw_config("missing required column: criteria (criteria_txt or flags)");
  }
  if (!just_cols && !just_col) {
    throw_config("missing required column: justification");
  }

  SyndicationTable table;
  std::set<int> seen_ids;
  const std::size_t width = rows[0].fields.size();
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    auto fail = [&](int site, const std::string& msg) {
      table.errors.push_back({row.line, site, msg});
    };
    if (row.fields.size() != width) {
      fail(0, "expected " + std::to_string(width) + " fields, found " +
                  std::to_string(row.fields.size()));
      continue;
    }
    bool utf8_ok = true;
    for (const auto& f : row.fields) utf8_ok = utf8_ok && is_valid_utf8(f);
    if (!utf8_ok) {
      fail(0, "invalid UTF-8");
      continue;
    }

    SiteRecord site;
    const std::string id_text = trim_ascii(row.fields[*id_col]);
    try {
      std::size_t used = 0;
      site.site_id = std::stoi(id_text, &used);
      if (used != id_text.size() || site.site_id <= 0) throw std::invalid_argument("id");
    } catch (const std::exception&) {
      fail(0, "unparseable site id '" + id_text + "'");
      continue;
    }
    if (!seen_ids.insert(site.site_id).second) {
      fail(site.site_id, "duplicate site id");
      continue;
    }
    site.name = strip_markup(row.fields[*name_col]);
    site.short_description = strip_markup(row.fields[*sd_col]);

    try {
      if (crit_flags) {
        for (int k = 1; k <= kNumCriteria; ++k) {
          if (truthy(row.fields[(*crit_flags)[k - 1]])) site.criteria.insert(CriterionId(k));
        }
      } else {
        site.criteria = parse_criteria_text(row.fields[*crit_text_col]);
      }
    } catch (const Error& e) {
      fail(site.site_id, e.what());
      continue;
    }
    if (site.criteria.empty()) {
      fail(site.site_id, "no criteria");
      continue;
    }

    std::map<CriterionId, std::string> paragraphs;
    if (just_cols) {
      for (int k = 1; k <= kNumCriteria; ++k) {
        std::string text = strip_markup(row.fields[(*just_cols)[k - 1]]);
        if (!text.empty()) paragraphs.emplace(CriterionId(k), std::move(text));
      }
    } else {
      const std::string& raw = row.fields[*just_col];
      JustificationSections sections = split_justification(raw);
      for (std::size_t s = 0; s < sections.shared.size(); ++s) {
        fail(site.site_id, "skipped a paragraph justifying several criteria jointly");
      }
      paragraphs = std::move(sections.by_criterion);
      if (paragraphs.empty() && sections.shared.empty()) {
        std::string text = strip_markup(raw);
        if (!text.empty()) {
          if (site.criteria.size() == 1) {
            paragraphs.emplace(*site.criteria.begin(), std::move(text));
          } else {
            fail(site.site_id,
                 "justification has no criterion markers for a multi-criteria site");
          }
        }
      }
    }
    for (auto& [k, text] : paragraphs) {
      if (!site.criteria.contains(k)) {
        fail(site.site_id, "justification for criterion (" +
                               std::string(criterion_roman(k)) +
                               ") which the site is not inscribed under");
        continue;
      }
      site.justification.emplace(k, std::move(text));
    }
    table.sites.push_back(std::move(site));
  }
  return table;
}

CriterionDefinitions load_definitions(const fs::path& path) {
  const Json doc = read_json(path);
  if (!doc.is_object()) throw_config(path.string() + ": expected a JSON object");
  CriterionDefinitions defs;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    auto id = parse_criterion(it.key());
    if (!id || id->is_others() || !it.value().is_string()) {
      throw_config(path.string() + ": bad definition entry '" + it.key() + "'");
    }
    defs[*id] = it.value().get<std::string>();
  }
  return defs;
}

std::vector<Sample> paragraph_samples(const SiteRecord& site, CriterionId criterion) {
  std::vector<Sample> out;
  auto it = site.justification.find(criterion);
  if (it == site.justification.end()) return out;
  const ParentalLabel parental = ParentalLabel::from_criteria(site.criteria);
  for (const std::string& sentence : split_sentences(it->second)) {
    Sample s;
    s.tokens = preprocess(sentence);
    if (s.length() < kMinSentenceTokens || s.length() > kMaxSentenceTokens) continue;
    s.sentence_label = criterion;
    s.one_hot = one_hot(criterion);
    s.parental = parental;
    s.site_id = site.site_id;
    s.split = Split::kTrain;
    out.push_back(std::move(s));
  }
  return out;
}

DatasetSplits build_dataset(std::span<const SiteRecord> sites,
                            const CriterionDefinitions& definitions,
                            std::uint64_t seed) {
  for (int k = 1; k <= kNumCriteria; ++k) {
    if (!definitions.contains(CriterionId(k))) {
      throw_config("missing definition for criterion (" +
                   std::string(criterion_roman(CriterionId(k))) + ")");
    }
  }
  if (definitions.size() != kNumCriteria) {
    throw_config("definitions must cover exactly criteria (i) - (x)");
  }

  std::vector<Sample> all;
  for (const SiteRecord& site : sites) {
    for (const auto& [k, text] : site.justification) {
      auto samples = paragraph_samples(site, k);
      std::move(samples.begin(), samples.end(), std::back_inserter(all));
    }
  }

  const std::size_t n = all.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order);

  const std::size_t n_valid = n / 10;
  const std::size_t n_test = n / 10;
  std::vector<Split> assigned(n, Split::kTrain);
  for (std::size_t i = 0; i < n_valid; ++i) assigned[order[i]] = Split::kValid;
  for (std::size_t i = n_valid; i < n_valid + n_test; ++i) assigned[order[i]] = Split::kTest;

  DatasetSplits out;
  for (std::size_t i = 0; i < n; ++i) {
    Sample& s = all[i];
    s.split = assigned[i];
    switch (s.split) {
      case Split::kValid: out.valid.push_back(std::move(s)); break;
      case Split::kTest: out.test.push_back(std::move(s)); break;
      default: out.train.push_back(std::move(s)); break;
    }
  }

  for (const auto& [k, text] : definitions) {
    Sample s;
    s.tokens = preprocess(text);
    s.sentence_label = k;
    s.one_hot = one_hot(k);
    s.parental = ParentalLabel::from_criteria({k});
    s.site_id = 0;
    s.split = Split::kTrain;
    out.train.push_back(std::move(s));
  }

  if (out.valid.empty()) throw_config("empty split: valid");
  if (out.test.empty()) throw_config("empty split: test");
  return out;
}

std::vector<Sample> build_sd_set(std::span<const SiteRecord> sites) {
  std::vector<Sample> out;
  for (const SiteRecord& site : sites) {
    if (site.criteria.empty() || site.short_description.empty()) continue;
    const ParentalLabel parental = ParentalLabel::from_criteria(site.criteria);
    for (const std::string& sentence : split_sentences(site.short_description)) {
      Sample s;
      s.tokens = preprocess(sentence);
      if (s.tokens.empty()) continue;
      s.parental = parental;
      s.site_id = site.site_id;
      s.split = Split::kSd;
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::array<std::size_t, kNumCriteria> per_class_counts(std::span<const Sample> samples) {
  std::array<std::size_t, kNumCriteria> counts{};
  for (const Sample& s : samples) {
    if (s.sentence_label) {
      ++counts[s.sentence_label->slot()];
    } else {
      for (CriterionId k : s.parental.criteria()) ++counts[k.slot()];
    }
  }
  return counts;
}

std::array<std::size_t, kNumCriteria + 1> criteria_count_distribution(
    std::span<const SiteRecord> sites) {
  std::array<std::size_t, kNumCriteria + 1> dist{};
  for (const SiteRecord& site : sites) {
    if (!site.criteria.empty()) ++dist[site.criteria.size()];
  }
  return dist;
}

Json sample_to_json(const Sample& s) {
  Json row;
  row["tokens"] = s.tokens;
  row["sentence_label"] = s.sentence_label ? Json(s.sentence_label->index()) : Json(nullptr);
  Json hot = Json::array();
  for (double v : s.one_hot) hot.push_back(static_cast<int>(v));
  row["one_hot"] = std::move(hot);
  Json par = Json::array();
  for (double v : s.parental.values()) par.push_back(v);
  row["parental"] = std::move(par);
  row["site_id"] = s.site_id;
  row["split"] = std::string(split_name(s.split));
  return row;
}

Sample sample_from_json(const Json& row) {
  try {
    Sample s;
    s.tokens = row.at("tokens").get<std::vector<std::string>>();
    const Json& label = row.at("sentence_label");
    if (!label.is_null()) s.sentence_label = CriterionId(label.get<int>());
    const Json& hot = row.at("one_hot");
    const Json& par = row.at("parental");
    if (hot.size() != kNumClasses || par.size() != kNumClasses) {
      throw_format("label vectors must have 11 entries");
    }
    LabelVector pv{};
    for (int k = 0; k < kNumClasses; ++k) {
      s.one_hot[k] = hot[k].get<double>();
      pv[k] = par[k].get<double>();
    }
    s.parental = ParentalLabel::from_values(pv);
    s.site_id = row.at("site_id").get<int>();
    s.split = parse_split(row.at("split").get<std::string>());
    return s;
  } catch (const Json::exception& e) {
    throw_format(std::string("bad sample record: ") + e.what());
  }
}

void write_samples_jsonl(const fs::path& path, std::span<const Sample> samples) {
  std::string out;
  for (const Sample& s : samples) {
    out += sample_to_json(s).dump();
    out.push_back('\n');
  }
  write_file(path, out);
}

namespace {

template <typename Fn>
void for_each_json_line(const fs::path& path, Fn&& fn) {
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim_ascii(line).empty()) continue;
    Json row;
    try {
      row = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw_format(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    fn(row);
  }
}

}  // namespace

std::vector<Sample> read_samples_jsonl(const fs::path& path) {
  std::vector<Sample> out;
  for_each_json_line(path, [&](const Json& row) { out.push_back(sample_from_json(row)); });
  return out;
}

void write_sites_jsonl(const fs::path& path, std::span<const SiteRecord> sites) {
  std::string out;
  for (const SiteRecord& site : sites) {
    Json row;
    row["site_id"] = site.site_id;
    row["name"] = site.name;
    Json crit = Json::array();
    for (CriterionId k : site.criteria) crit.push_back(k.index());
    row["criteria"] = std::move(crit);
    row["has_justification"] = site.has_justification();
    out += row.dump();
    out.push_back('\n');
  }
  write_file(path, out);
}

std::vector<SiteRecord> read_sites_jsonl(const fs::path& path) {
  std::vector<SiteRecord> out;
  for_each_json_line(path, [&](const Json& row) {
    try {
      SiteRecord site;
      site.site_id = row.at("site_id").get<int>();
      site.name = row.value("name", std::string());
      for (int k : row.at("criteria").get<std::vector<int>>()) {
        site.criteria.insert(CriterionId(k));
      }
      out.push_back(std::move(site));
    } catch (const Json::exception& e) {
      throw_format(path.string() + ": bad site record: " + e.what());
    }
  });
  return out;
}

const std::vector<Sample>& Corpus::split(Split which) const {
  switch (which) {
    case Split::kTrain: return train;
    case Split::kValid: return valid;
    case Split::kTest: return test;
    case Split::kSd: return sd;
  }
  return train;
}

Corpus load_corpus(const fs::path& dir) {
  std::vector<std::string> missing;
  for (auto name : {kTrainFile, kValidFile, kTestFile}) {
    if (!fs::exists(dir / name)) missing.emplace_back(name);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += " " + m;
    throw_io("dataset directory " + dir.string() + " lacks:" + list);
  }
  Corpus c;
  c.train = read_samples_jsonl(dir / kTrainFile);
  c.valid = read_samples_jsonl(dir / kValidFile);
  c.test = read_samples_jsonl(dir / kTestFile);
  if (fs::exists(dir / kSdFile)) {
    c.sd = read_samples_jsonl(dir / kSdFile);
    c.has_sd = true;
  }
  if (fs::exists(dir / kSitesFile)) c.sites = read_sites_jsonl(dir / kSitesFile);
  return c;
}

std::string corpus_hash(const fs::path& dir) {
  std::string acc;
  for (auto name : {kTrainFile, kValidFile, kTestFile, kSdFile, kSitesFile}) {
    if (fs::exists(dir / name)) acc += std::string(name) + "=" + file_hash(dir / name) + ";";
  }
  return content_hash(acc);
}

}  // namespace ouvls
