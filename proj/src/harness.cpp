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

#include "ouvls/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ouvls/error.hpp"

namespace ouvls {
namespace fs = std::filesystem;

namespace {

constexpr std::string_view kManifestFile = "manifest.json";

void emit(const LogFn& log, const std::string& line) {
  if (log) log(line);
}

void append_jsonl(const fs::path& path, const Json& row) {
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw_io("cannot append to " + path.string());
  out << row.dump() << '\n';
  if (!out) throw_io("write failed: " + path.string());
}

std::vector<Json> read_jsonl(const fs::path& path) {
  std::vector<Json> rows;
  if (!fs::exists(path)) return rows;
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      rows.push_back(Json::parse(line));
    } catch (const Json::parse_error&) {
      // A torn final line from an interrupted run is dropped; anything else is corrupt.
      if (in.peek() != EOF) throw_format(path.string() + ":" + std::to_string(n) + ": bad JSON line");
    }
  }
  return rows;
}

template <typename T>
Json list_json(const std::vector<T>& v) {
  Json a = Json::array();
  for (const T& x : v) a.push_back(x);
  return a;
}

template <typename T>
std::vector<T> list_from(const Json& doc, const char* key) {
  std::vector<T> out;
  if (!doc.contains(key)) return out;
  const Json& a = doc.at(key);
  if (!a.is_array()) throw_config(std::string(key) + " must be a list");
  for (const Json& x : a) out.push_back(x.get<T>());
  return out;
}

void reject_unknown(const Json& doc, std::initializer_list<std::string_view> keys, const char* where) {
  for (const auto& [k, _] : doc.items()) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      throw_config(std::string("unknown key '") + k + "' in " + where);
    }
  }
}

/// Hash over the inputs that determine a step's outputs.
std::string step_key(const Json& inputs) { return content_hash(inputs.dump()); }

bool manifest_matches(const fs::path& dir, const std::string& key) {
  const fs::path file = dir / kManifestFile;
  if (!fs::exists(file)) return false;
  try {
    return read_json(file).value("key", std::string()) == key;
  } catch (const Error&) {
    return false;
  }
}

void write_manifest(const fs::path& dir, std::string_view step, const ExperimentConfig& cfg,
                    const std::string& key, const Json& inputs) {
  Json m;
  m["step"] = step;
  m["baseline"] = baseline_name(cfg.baseline);
  m["dataset"] = cfg.dataset.string();
  m["key"] = key;
  m["inputs"] = inputs;
  write_json(dir / kManifestFile, m);
}

Json embeddings_fingerprint(const ExperimentConfig& cfg) {
  if (cfg.baseline != Baseline::kBoe) return nullptr;
  // Size plus path keeps resumption cheap for multi-gigabyte vector files.
  const auto size = fs::exists(cfg.embeddings) ? static_cast<long long>(fs::file_size(cfg.embeddings)) : -1LL;
  return Json{{"path", cfg.embeddings.string()}, {"size", size}};
}

Json step_inputs(const ExperimentConfig& cfg, const std::string& corpus) {
  Json in;
  in["baseline"] = baseline_name(cfg.baseline);
  in["corpus"] = corpus;
  in["embeddings"] = embeddings_fingerprint(cfg);
  return in;
}

std::optional<PriorWeights> maybe_prior(const ExperimentConfig& cfg, const Corpus& corpus,
                                        std::span<const SmoothingVariant> variants) {
  if (std::find(variants.begin(), variants.end(), SmoothingVariant::kPrior) == variants.end()) {
    return std::nullopt;
  }
  return prior_weights(load_prior_counts(cfg, corpus));
}

struct FeaturizerCache {
  const ExperimentConfig& cfg;
  const Corpus& corpus;
  const LogFn& log;
  std::map<int, Featurizer> built;

  const Featurizer& get(const Setting& s) {
    const int knob = cfg.baseline == Baseline::kNgram ? s.min_df : s.frequency_threshold;
    auto it = built.find(knob);
    if (it == built.end()) {
      EmbeddingLoadReport rep;
      it = built.emplace(knob, build_featurizer(cfg.baseline, s, corpus, cfg.embeddings, &rep)).first;
      if (cfg.baseline == Baseline::kBoe) {
        emit(log, "embeddings: kept " + std::to_string(rep.kept) + " of " + std::to_string(rep.lines_read) +
                      " lines, " + std::to_string(rep.errors.size()) + " skipped");
      }
      emit(log, "featurizer dimension " + std::to_string(it->second.dimension()));
    }
    return it->second;
  }
};

Setting read_best_setting(const ExperimentConfig& cfg, const LogFn& log) {
  const fs::path file = cfg.output / "grid" / "best_setting.json";
  const std::string key = step_key(
      Json{{"grid", cfg.grid.to_json()}, {"base", cfg.setting.to_json()}, {"seed", cfg.grid_seed},
           {"common", step_inputs(cfg, corpus_hash(cfg.dataset))}});
  if (fs::exists(file) && manifest_matches(cfg.output / "grid", key)) {
    return Setting::from_json(read_json(file).at("setting"), cfg.setting);
  }
  emit(log, "no current grid search result; running step 1");
  return run_grid_search(cfg, log).best;
}

void write_eval_files(const fs::path& dir, const EvalReport& valid, const EvalReport& test) {
  write_json(dir / "eval.json", Json{{"valid", eval_to_json(valid)}, {"test", eval_to_json(test)}});
  write_file(dir / "confusion_valid.csv", confusion_to_csv(valid.confusion));
  write_file(dir / "confusion_test.csv", confusion_to_csv(test.confusion));
}

}  // namespace

// Names and config ------------------------------------------------------------------

std::string_view baseline_name(Baseline b) { return b == Baseline::kNgram ? "ngram" : "boe"; }

Baseline parse_baseline(std::string_view name) {
  if (name == "ngram") return Baseline::kNgram;
  if (name == "boe") return Baseline::kBoe;
  throw_config("unknown baseline '" + std::string(name) + "' (expected ngram or boe)");
}

Json Setting::to_json() const {
  Json doc = train.to_json();
  doc["min_df"] = min_df;
  doc["frequency_threshold"] = frequency_threshold;
  return doc;
}

Setting Setting::from_json(const Json& doc, const Setting& base) {
  if (!doc.is_object()) throw_config("setting must be an object");
  reject_unknown(doc,
                 {"hidden", "batch_size", "learning_rate", "l2", "dropout", "max_epochs", "patience",
                  "seed", "topk", "smoothing", "min_df", "frequency_threshold"},
                 "setting");
  Json merged = base.to_json();
  for (const auto& [k, v] : doc.items()) merged[k] = v;
  Setting s;
  s.train = TrainConfig::from_json(merged);
  try {
    s.min_df = merged.at("min_df").get<int>();
    s.frequency_threshold = merged.at("frequency_threshold").get<int>();
  } catch (const Json::exception& e) {
    throw_config(std::string("bad setting: ") + e.what());
  }
  return s;
}

Setting default_setting(Baseline b) {
  Setting s;
  if (b == Baseline::kNgram) {
    s.train.hidden = 200;
    s.train.batch_size = 128;
    s.train.learning_rate = 2e-4;
    s.train.l2 = 1e-5;
    s.train.dropout = 0.5;
  } else {
    s.train.hidden = 200;
    s.train.batch_size = 64;
    s.train.learning_rate = 5e-4;
    s.train.l2 = 1e-5;
    s.train.dropout = 0.1;
  }
  s.min_df = 2;
  s.frequency_threshold = 1;
  return s;
}

HyperGrid default_grid(Baseline b) {
  HyperGrid g;
  g.hidden = {50, 100, 150, 200};
  g.batch_size = {64, 128, 256};
  if (b == Baseline::kNgram) {
    g.l2 = {0.0, 1e-5, 1e-4};
    g.dropout = {0.1, 0.2, 0.5};
  } else {
    g.frequency_threshold = {1, 3, 5};
  }
  return g;
}

Json HyperGrid::to_json() const {
  return Json{{"hidden", list_json(hidden)},
              {"batch_size", list_json(batch_size)},
              {"learning_rate", list_json(learning_rate)},
              {"l2", list_json(l2)},
              {"dropout", list_json(dropout)},
              {"min_df", list_json(min_df)},
              {"frequency_threshold", list_json(frequency_threshold)}};
}

HyperGrid HyperGrid::from_json(const Json& doc) {
  if (!doc.is_object()) throw_config("grid must be an object");
  reject_unknown(doc,
                 {"hidden", "batch_size", "learning_rate", "l2", "dropout", "min_df", "frequency_threshold"},
                 "grid");
  try {
    HyperGrid g;
    g.hidden = list_from<int>(doc, "hidden");
    g.batch_size = list_from<int>(doc, "batch_size");
    g.learning_rate = list_from<double>(doc, "learning_rate");
    g.l2 = list_from<double>(doc, "l2");
    g.dropout = list_from<double>(doc, "dropout");
    g.min_df = list_from<int>(doc, "min_df");
    g.frequency_threshold = list_from<int>(doc, "frequency_threshold");
    return g;
  } catch (const Json::exception& e) {
    throw_config(std::string("bad grid: ") + e.what());
  }
}

std::vector<Setting> HyperGrid::expand(const Setting& base) const {
  auto or_base = [](const auto& list, auto value) {
    using T = decltype(value);
    return list.empty() ? std::vector<T>{value} : std::vector<T>(list.begin(), list.end());
  };
  std::vector<Setting> out;
  for (int h : or_base(hidden, base.train.hidden))
    for (int b : or_base(batch_size, base.train.batch_size))
      for (double lr : or_base(learning_rate, base.train.learning_rate))
        for (double l2v : or_base(l2, base.train.l2))
          for (double d : or_base(dropout, base.train.dropout))
            for (int md : or_base(min_df, base.min_df))
              for (int ft : or_base(frequency_threshold, base.frequency_threshold)) {
                Setting s = base;
                s.train.hidden = h;
                s.train.batch_size = b;
                s.train.learning_rate = lr;
                s.train.l2 = l2v;
                s.train.dropout = d;
                s.min_df = md;
                s.frequency_threshold = ft;
                out.push_back(s);
              }
  return out;
}

void ExperimentConfig::validate() const {
  if (dataset.empty()) throw_config("config needs a dataset path");
  if (output.empty()) throw_config("config needs an output path");
  if (baseline == Baseline::kBoe && embeddings.empty()) throw_config("the boe baseline needs an embeddings path");
  setting.train.validate();
  for (const Setting& s : grid.expand(setting)) {
    s.train.validate();
    if (s.min_df < 1) throw_config("min_df must be at least 1");
    if (s.frequency_threshold < 0) throw_config("frequency_threshold must be non-negative");
  }
  if (alpha_grid.empty()) throw_config("alpha_grid is empty");
  for (double a : alpha_grid) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw_config("alpha values must be finite and non-negative");
  }
  if (variants.empty()) throw_config("variants is empty");
  for (SmoothingVariant v : variants) {
    if (v == SmoothingVariant::kNone) throw_config("variants may only name vanilla, uniform or prior");
  }
}

Json ExperimentConfig::to_json() const {
  Json doc;
  doc["baseline"] = baseline_name(baseline);
  doc["dataset"] = dataset.string();
  doc["embeddings"] = embeddings.string();
  doc["prior"] = prior.string();
  doc["output"] = output.string();
  doc["setting"] = setting.to_json();
  doc["grid"] = grid.to_json();
  doc["grid_seed"] = grid_seed;
  doc["final_seed"] = final_seed;
  doc["seeds"] = list_json(seeds);
  doc["alpha_grid"] = list_json(alpha_grid);
  Json vs = Json::array();
  for (SmoothingVariant v : variants) vs.push_back(std::string(variant_name(v)));
  doc["variants"] = std::move(vs);
  return doc;
}

ExperimentConfig ExperimentConfig::from_json(const Json& doc) {
  if (!doc.is_object()) throw_config("config must be a JSON object");
  reject_unknown(doc,
                 {"baseline", "dataset", "embeddings", "prior", "output", "setting", "grid", "grid_seed",
                  "final_seed", "seeds", "alpha_grid", "variants"},
                 "config");
  ExperimentConfig c;
  try {
    c.baseline = parse_baseline(doc.value("baseline", std::string("ngram")));
    c.setting = default_setting(c.baseline);
    c.grid = default_grid(c.baseline);
    if (doc.contains("setting")) c.setting = Setting::from_json(doc.at("setting"), c.setting);
    if (doc.contains("grid")) c.grid = HyperGrid::from_json(doc.at("grid"));
    c.grid_seed = doc.value("grid_seed", c.grid_seed);
    c.final_seed = doc.value("final_seed", c.final_seed);
    if (doc.contains("seeds")) c.seeds = list_from<std::uint64_t>(doc, "seeds");
    if (doc.contains("alpha_grid")) c.alpha_grid = list_from<double>(doc, "alpha_grid");
    if (doc.contains("variants")) {
      c.variants.clear();
      for (const auto& name : list_from<std::string>(doc, "variants")) c.variants.push_back(parse_variant(name));
    }
    c.dataset = doc.value("dataset", std::string());
    c.embeddings = doc.value("embeddings", std::string());
    c.prior = doc.value("prior", std::string());
    c.output = doc.value("output", std::string());
  } catch (const Json::exception& e) {
    throw_config(std::string("bad config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const fs::path& path) {
  if (!fs::exists(path)) throw_io("config file not found: " + path.string());
  try {
    return from_json(read_json(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kFormat) throw_config(e.what());
    throw;
  }
}

// Building blocks ---------------------------------------------------------------------

Featurizer build_featurizer(Baseline b, const Setting& s, const Corpus& corpus, const fs::path& embeddings,
                            EmbeddingLoadReport* report) {
  if (b == Baseline::kNgram) return Featurizer(fit_tfidf(std::span<const Sample>(corpus.train), s.min_df));
  if (embeddings.empty()) throw_config("the boe baseline needs an embeddings path");
  return Featurizer(load_embeddings(embeddings, s.frequency_threshold,
                                    token_frequencies(std::span<const Sample>(corpus.train)), report));
}

CooccurrenceMatrix prior_counts_from_dataset(const fs::path& dataset) {
  const fs::path sites = dataset / kSitesFile;
  if (fs::exists(sites)) {
    const auto records = read_sites_jsonl(sites);
    return cooccurrence(std::span<const SiteRecord>(records));
  }
  // Without a site table, recover each site's criteria from its samples' parental labels.
  const Corpus c = load_corpus(dataset);
  std::map<int, CriteriaSet> by_site;
  for (const auto* split : {&c.train, &c.valid, &c.test}) {
    for (const Sample& s : *split) {
      if (s.site_id != 0) by_site.emplace(s.site_id, s.parental.criteria());
    }
  }
  std::vector<CriteriaSet> sets;
  for (auto& [_, set] : by_site) sets.push_back(set);
  return cooccurrence(std::span<const CriteriaSet>(sets));
}

CooccurrenceMatrix load_prior_counts(const ExperimentConfig& cfg, const Corpus&) {
  if (!cfg.prior.empty()) return prior_from_json(read_json(cfg.prior));
  return prior_counts_from_dataset(cfg.dataset);
}

std::vector<Ranking> rank_samples(const MlpParams& params, const Featurizer& featurizer,
                                  std::span<const Sample> samples) {
  std::vector<Ranking> out;
  out.reserve(samples.size());
  for (const Sample& s : samples) out.push_back(ranking_of(predict_proba(params, featurizer.featurize(s.tokens))));
  return out;
}

SplitEvaluation evaluate_samples(const MlpParams& params, const Featurizer& featurizer,
                                 std::span<const Sample> samples, Split split, int k) {
  const std::vector<Ranking> ranked = rank_samples(params, featurizer, samples);
  SplitEvaluation ev;
  if (split == Split::kSd) {
    std::vector<ParentalLabel> parentals;
    for (const Sample& s : samples) parentals.push_back(s.parental);
    ev.matches = evaluate_matches(ranked, parentals, k);
  } else {
    std::vector<int> truths;
    for (const Sample& s : samples) {
      if (!s.sentence_label) throw_domain("labelled split sample without a sentence label");
      truths.push_back(s.sentence_label->index());
    }
    ev.labelled = evaluate_split(ranked, truths, k);
  }
  return ev;
}

// Ingest --------------------------------------------------------------------------------

Json IngestSummary::to_json() const {
  return Json{{"sites", sites}, {"record_errors", record_errors}, {"train", train},
              {"valid", valid}, {"test", test},   {"sd", sd}};
}

IngestSummary ingest(const fs::path& csv, const fs::path& out, std::uint64_t seed,
                     const std::optional<fs::path>& definitions, const LogFn& log) {
  const SyndicationTable table = parse_syndication(csv);
  const CriterionDefinitions defs = definitions ? load_definitions(*definitions) : builtin_definitions();
  const DatasetSplits splits = build_dataset(table.sites, defs, seed);
  const std::vector<Sample> sd = build_sd_set(table.sites);

  fs::create_directories(out);
  write_samples_jsonl(out / kTrainFile, splits.train);
  write_samples_jsonl(out / kValidFile, splits.valid);
  write_samples_jsonl(out / kTestFile, splits.test);
  write_samples_jsonl(out / kSdFile, sd);
  write_sites_jsonl(out / kSitesFile, table.sites);
  std::string errors;
  for (const RecordError& e : table.errors) {
    errors += Json{{"line", e.line}, {"site_id", e.site_id}, {"message", e.message}}.dump() + "\n";
    emit(log, "line " + std::to_string(e.line) + ": " + e.message);
  }
  write_file(out / "errors.jsonl", errors);

  IngestSummary sum;
  sum.sites = table.sites.size();
  sum.record_errors = table.errors.size();
  sum.train = splits.train.size();
  sum.valid = splits.valid.size();
  sum.test = splits.test.size();
  sum.sd = sd.size();
  Json m;
  m["step"] = "ingest";
  m["source"] = file_hash(csv);
  m["seed"] = seed;
  m["definitions"] = definitions ? file_hash(*definitions) : std::string("builtin");
  m["summary"] = sum.to_json();
  write_json(out / kManifestFile, m);
  return sum;
}

// Single training run -------------------------------------------------------------------

TrainOutcome run_train(const ExperimentConfig& cfg, const LogFn& log) {
  cfg.validate();
  const Corpus corpus = load_corpus(cfg.dataset);
  const Setting& s = cfg.setting;
  std::optional<PriorWeights> prior;
  if (s.train.smoothing.variant == SmoothingVariant::kPrior) prior = prior_weights(load_prior_counts(cfg, corpus));
  EmbeddingLoadReport rep;
  const Featurizer featurizer = build_featurizer(cfg.baseline, s, corpus, cfg.embeddings, &rep);
  emit(log, "training " + std::string(baseline_name(cfg.baseline)) + " with input dimension " +
                std::to_string(featurizer.dimension()));
  TrainOutcome out;
  out.model = train(corpus.train, corpus.valid, featurizer, s.train, prior ? &*prior : nullptr, log);
  out.directory = cfg.output / "train";
  fs::create_directories(out.directory);
  save_model(out.directory, out.model, featurizer);
  out.valid = *evaluate_samples(out.model.params, featurizer, corpus.valid, Split::kValid, s.train.topk).labelled;
  out.test = *evaluate_samples(out.model.params, featurizer, corpus.test, Split::kTest, s.train.topk).labelled;
  write_eval_files(out.directory, out.valid, out.test);
  Json inputs = step_inputs(cfg, corpus_hash(cfg.dataset));
  inputs["setting"] = s.to_json();
  write_manifest(out.directory, "train", cfg, step_key(inputs), inputs);
  return out;
}

// Step 1 -------------------------------------------------------------------------------

Json GridEntry::to_json() const {
  Json doc{{"setting", setting.to_json()}, {"ok", ok}};
  if (ok) {
    doc["best_epoch"] = best_epoch;
    doc["val_top1"] = val_top1;
    doc["val_topk"] = val_topk;
  } else {
    doc["error"] = error;
  }
  return doc;
}

GridEntry GridEntry::from_json(const Json& doc, const Setting& base) {
  GridEntry e;
  e.setting = Setting::from_json(doc.at("setting"), base);
  e.ok = doc.at("ok").get<bool>();
  if (e.ok) {
    e.best_epoch = doc.at("best_epoch").get<int>();
    e.val_top1 = doc.at("val_top1").get<double>();
    e.val_topk = doc.at("val_topk").get<double>();
  } else {
    e.error = doc.value("error", std::string());
  }
  return e;
}

GridResult run_grid_search(const ExperimentConfig& cfg, const LogFn& log) {
  cfg.validate();
  const Corpus corpus = load_corpus(cfg.dataset);
  const fs::path dir = cfg.output / "grid";
  fs::create_directories(dir);
  const Json inputs{{"grid", cfg.grid.to_json()}, {"base", cfg.setting.to_json()}, {"seed", cfg.grid_seed},
                    {"common", step_inputs(cfg, corpus_hash(cfg.dataset))}};
  const std::string key = step_key(inputs);
  const fs::path log_file = dir / "grid_log.jsonl";

  std::map<std::string, GridEntry> done;
  if (manifest_matches(dir, key)) {
    for (const Json& row : read_jsonl(log_file)) {
      GridEntry e = GridEntry::from_json(row, cfg.setting);
      done.emplace(e.setting.to_json().dump(), e);
    }
  }
  // Rewrite the log so it holds exactly the settings of this grid, in grid order.
  write_file(log_file, "");
  write_manifest(dir, "grid", cfg, key, inputs);

  std::vector<Setting> settings = cfg.grid.expand(cfg.setting);
  for (Setting& s : settings) {
    s.train.seed = cfg.grid_seed;
    s.train.smoothing = SmoothingConfig{};
  }
  FeaturizerCache cache{cfg, corpus, log, {}};
  GridResult result;
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < settings.size(); ++i) {
    const Setting& s = settings[i];
    GridEntry e;
    e.setting = s;
    if (auto it = done.find(s.to_json().dump()); it != done.end()) {
      e = it->second;
    } else {
      try {
        const TrainedModel m = train(corpus.train, corpus.valid, cache.get(s), s.train, nullptr, {});
        e.ok = true;
        e.best_epoch = m.best_epoch;
        e.val_top1 = m.history[static_cast<std::size_t>(m.best_epoch - 1)].val_top1;
        e.val_topk = m.history[static_cast<std::size_t>(m.best_epoch - 1)].val_topk;
      } catch (const Error& err) {
        e.ok = false;
        e.error = err.what();
      }
    }
    append_jsonl(log_file, e.to_json());
    emit(log, "grid " + std::to_string(i + 1) + "/" + std::to_string(settings.size()) + " " +
                  (e.ok ? "val_topk " + format_double(e.val_topk) : "failed: " + e.error));
    if (e.ok && (!best || e.val_topk > result.entries[*best].val_topk)) best = i;
    result.entries.push_back(std::move(e));
  }
  if (!best) throw Error(ErrorCode::kTraining, "every grid setting failed");
  result.best = result.entries[*best].setting;
  write_json(dir / "best_setting.json",
             Json{{"setting", result.best.to_json()}, {"index", *best}, {"val_topk", result.entries[*best].val_topk},
                  {"val_top1", result.entries[*best].val_top1}});
  return result;
}

// Step 2 -------------------------------------------------------------------------------

Json SweepRun::to_json() const {
  Json doc{{"variant", std::string(variant_name(variant))}, {"alpha", alpha}, {"seed", seed}, {"ok", ok}};
  if (ok) {
    doc["best_epoch"] = best_epoch;
    doc["val_top1"] = val_top1;
    doc["val_topk"] = val_topk;
  } else {
    doc["error"] = error;
  }
  return doc;
}

SweepRun SweepRun::from_json(const Json& doc) {
  SweepRun r;
  r.variant = parse_variant(doc.at("variant").get<std::string>());
  r.alpha = doc.at("alpha").get<double>();
  r.seed = doc.at("seed").get<std::uint64_t>();
  r.ok = doc.at("ok").get<bool>();
  if (r.ok) {
    r.best_epoch = doc.at("best_epoch").get<int>();
    r.val_top1 = doc.at("val_top1").get<double>();
    r.val_topk = doc.at("val_topk").get<double>();
  } else {
    r.error = doc.value("error", std::string());
  }
  return r;
}

Json SweepCell::to_json() const {
  return Json{{"variant", std::string(variant_name(variant))},
              {"alpha", alpha},
              {"completed", completed},
              {"mean_top1", mean_top1},
              {"sd_top1", sd_top1},
              {"mean_topk", mean_topk},
              {"sd_topk", sd_topk},
              {"eligible", eligible},
              {"score", score}};
}

SweepCell SweepCell::from_json(const Json& doc) {
  SweepCell c;
  c.variant = parse_variant(doc.at("variant").get<std::string>());
  c.alpha = doc.at("alpha").get<double>();
  c.completed = doc.at("completed").get<std::size_t>();
  c.mean_top1 = doc.at("mean_top1").get<double>();
  c.sd_top1 = doc.at("sd_top1").get<double>();
  c.mean_topk = doc.at("mean_topk").get<double>();
  c.sd_topk = doc.at("sd_topk").get<double>();
  c.eligible = doc.at("eligible").get<bool>();
  c.score = doc.at("score").get<double>();
  return c;
}

Json SweepResult::to_json() const {
  Json cs = Json::array();
  for (const SweepCell& c : cells) cs.push_back(c.to_json());
  return Json{{"cells", std::move(cs)}, {"chosen", chosen ? chosen->to_json() : Json(nullptr)}};
}

SweepResult SweepResult::from_json(const Json& doc) {
  try {
    SweepResult r;
    for (const Json& c : doc.at("cells")) r.cells.push_back(SweepCell::from_json(c));
    if (!doc.at("chosen").is_null()) r.chosen = SweepCell::from_json(doc.at("chosen"));
    return r;
  } catch (const Json::exception& e) {
    throw_format(std::string("bad sweep result: ") + e.what());
  }
}

namespace {

std::pair<double, double> mean_sd(std::span<const double> v) {
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0};
}

int variant_rank(SmoothingVariant v) { return static_cast<int>(v); }

}  // namespace

double lower_confidence_bound(std::span<const double> values) {
  if (values.size() < 2) throw_domain("a confidence bound needs at least two values");
  const auto [mean, sd] = mean_sd(values);
  return mean - 1.96 * sd / std::sqrt(static_cast<double>(values.size()));
}

SweepResult summarize_sweep(std::span<const SweepRun> runs, std::span<const SmoothingVariant> variants,
                            std::span<const double> alphas) {
  SweepResult res;
  for (SmoothingVariant v : variants) {
    for (double a : alphas) {
      SweepCell cell;
      cell.variant = v;
      cell.alpha = a;
      // One value per seed; later duplicates of a (variant, alpha, seed) are ignored.
      std::set<std::uint64_t> seen;
      std::vector<double> top1, topk;
      for (const SweepRun& r : runs) {
        if (r.variant != v || r.alpha != a || !r.ok || !seen.insert(r.seed).second) continue;
        top1.push_back(r.val_top1);
        topk.push_back(r.val_topk);
      }
      cell.completed = top1.size();
      if (!top1.empty()) {
        std::tie(cell.mean_top1, cell.sd_top1) = mean_sd(top1);
        std::tie(cell.mean_topk, cell.sd_topk) = mean_sd(topk);
      }
      cell.eligible = cell.completed >= 2;
      if (cell.eligible) cell.score = lower_confidence_bound(top1) + lower_confidence_bound(topk);
      res.cells.push_back(cell);
    }
  }
  for (const SweepCell& c : res.cells) {
    if (!c.eligible) continue;
    if (!res.chosen) {
      res.chosen = c;
      continue;
    }
    const SweepCell& b = *res.chosen;
    const bool better = c.score > b.score ||
                        (c.score == b.score && (c.alpha < b.alpha ||
                                                (c.alpha == b.alpha && variant_rank(c.variant) < variant_rank(b.variant))));
    if (better) res.chosen = c;
  }
  return res;
}

SweepResult run_ls_sweep(const ExperimentConfig& cfg, const LogFn& log) {
  cfg.validate();
  if (cfg.seeds.size() < 2) throw_config("the smoothing sweep needs at least two seeds");
  const Setting best = read_best_setting(cfg, log);
  const Corpus corpus = load_corpus(cfg.dataset);
  const std::optional<PriorWeights> prior = maybe_prior(cfg, corpus, cfg.variants);

  const fs::path dir = cfg.output / "sweep";
  fs::create_directories(dir);
  Json inputs{{"setting", best.to_json()},
              {"seeds", list_json(cfg.seeds)},
              {"alpha_grid", list_json(cfg.alpha_grid)},
              {"common", step_inputs(cfg, corpus_hash(cfg.dataset))}};
  Json vs = Json::array();
  for (SmoothingVariant v : cfg.variants) vs.push_back(std::string(variant_name(v)));
  inputs["variants"] = vs;
  if (prior) inputs["prior"] = prior_to_json(load_prior_counts(cfg, corpus), *prior);
  const std::string key = step_key(inputs);
  const fs::path runs_file = dir / "runs.jsonl";

  std::vector<SweepRun> runs;
  if (manifest_matches(dir, key)) {
    for (const Json& row : read_jsonl(runs_file)) runs.push_back(SweepRun::from_json(row));
  }
  write_file(runs_file, "");
  for (const SweepRun& r : runs) append_jsonl(runs_file, r.to_json());
  write_manifest(dir, "sweep", cfg, key, inputs);

  FeaturizerCache cache{cfg, corpus, log, {}};
  auto find_run = [&](SmoothingVariant v, double a, std::uint64_t seed) -> const SweepRun* {
    for (const SweepRun& r : runs) {
      if (r.alpha == a && r.seed == seed && (r.variant == v || a == 0.0)) return &r;
    }
    return nullptr;
  };
  const std::size_t total = cfg.variants.size() * cfg.alpha_grid.size() * cfg.seeds.size();
  std::size_t index = 0;
  for (SmoothingVariant v : cfg.variants) {
    for (double a : cfg.alpha_grid) {
      for (std::uint64_t seed : cfg.seeds) {
        ++index;
        const SweepRun* prev = find_run(v, a, seed);
        if (prev && prev->variant == v) continue;
        SweepRun r;
        if (prev) {
          // alpha = 0 leaves every target one-hot, so all variants share one run per seed.
          r = *prev;
          r.variant = v;
        } else {
          r.variant = v;
          r.alpha = a;
          r.seed = seed;
          Setting s = best;
          s.train.seed = seed;
          s.train.smoothing = SmoothingConfig{v, a};
          try {
            const TrainedModel m =
                train(corpus.train, corpus.valid, cache.get(s), s.train, prior ? &*prior : nullptr, {});
            r.ok = true;
            r.best_epoch = m.best_epoch;
            r.val_top1 = m.history[static_cast<std::size_t>(m.best_epoch - 1)].val_top1;
            r.val_topk = m.history[static_cast<std::size_t>(m.best_epoch - 1)].val_topk;
          } catch (const Error& err) {
            r.ok = false;
            r.error = err.what();
          }
        }
        runs.push_back(r);
        append_jsonl(runs_file, r.to_json());
        emit(log, "sweep " + std::to_string(index) + "/" + std::to_string(total) + " " +
                      std::string(variant_name(v)) + " alpha " + format_double(a) + " seed " +
                      std::to_string(seed) + (r.ok ? " val_topk " + format_double(r.val_topk) : " failed: " + r.error));
      }
    }
  }
  // Aggregate in (variant, alpha, seed) order regardless of how runs were collected.
  std::sort(runs.begin(), runs.end(), [](const SweepRun& x, const SweepRun& y) {
    return std::tuple(variant_rank(x.variant), x.alpha, x.seed) < std::tuple(variant_rank(y.variant), y.alpha, y.seed);
  });
  std::vector<SweepRun> wanted;
  for (const SweepRun& r : runs) {
    const bool in_grid = std::find(cfg.seeds.begin(), cfg.seeds.end(), r.seed) != cfg.seeds.end();
    if (in_grid) wanted.push_back(r);
  }
  SweepResult res = summarize_sweep(wanted, cfg.variants, cfg.alpha_grid);
  if (!res.chosen) throw Error(ErrorCode::kTraining, "no smoothing cell completed at least two seeds");
  Json doc = res.to_json();
  doc["setting"] = best.to_json();
  write_json(dir / "sweep_result.json", doc);
  return res;
}

// Step 3 -------------------------------------------------------------------------------

Json FinalRow::to_json() const {
  Json doc;
  doc["label"] = label;
  doc["variant"] = variant_name(smoothing.variant);
  doc["alpha"] = smoothing.alpha;
  doc["val_top1"] = valid.top1_accuracy;
  doc["val_topk"] = valid.topk_accuracy;
  doc["val_macro_f1"] = valid.macro_f1;
  doc["test_top1"] = test.top1_accuracy;
  doc["test_topk"] = test.topk_accuracy;
  doc["test_macro_f1"] = test.macro_f1;
  doc["sd_top1_match"] = sd ? Json(sd->top1_match) : Json(nullptr);
  doc["sd_topk_match"] = sd ? Json(sd->topk_match) : Json(nullptr);
  return doc;
}

FinalResult run_final(const ExperimentConfig& cfg, const LogFn& log) {
  cfg.validate();
  const fs::path sweep_file = cfg.output / "sweep" / "sweep_result.json";
  SweepResult sweep;
  Setting best;
  if (fs::exists(sweep_file)) {
    const Json doc = read_json(sweep_file);
    sweep = SweepResult::from_json(doc);
    best = Setting::from_json(doc.at("setting"), cfg.setting);
  } else {
    emit(log, "no sweep result; running step 2");
    sweep = run_ls_sweep(cfg, log);
    best = read_best_setting(cfg, log);
  }
  if (!sweep.chosen) throw_config("sweep result has no chosen smoothing configuration");

  const Corpus corpus = load_corpus(cfg.dataset);
  const SmoothingConfig chosen{sweep.chosen->variant, sweep.chosen->alpha};
  const std::array<SmoothingVariant, 1> needs{chosen.variant};
  const std::optional<PriorWeights> prior = maybe_prior(cfg, corpus, needs);
  FeaturizerCache cache{cfg, corpus, log, {}};
  const Featurizer& featurizer = cache.get(best);
  const int k = best.train.topk;

  FinalResult result;
  result.partial = !corpus.has_sd;
  if (result.partial) emit(log, "warning: dataset has no sd.jsonl; SD match metrics are omitted");
  const fs::path dir = cfg.output / "final";
  fs::create_directories(dir);
  for (const auto& [label, smoothing] : {std::pair<std::string, SmoothingConfig>{"no_ls", SmoothingConfig{}},
                                         std::pair<std::string, SmoothingConfig>{"ls", chosen}}) {
    Setting s = best;
    s.train.seed = cfg.final_seed;
    s.train.smoothing = smoothing;
    emit(log, "final " + label + ": " + std::string(variant_name(smoothing.variant)) + " alpha " +
                  format_double(smoothing.alpha));
    TrainedModel m = train(corpus.train, corpus.valid, featurizer, s.train, prior ? &*prior : nullptr, log);
    const fs::path mdir = dir / label;
    fs::create_directories(mdir);
    save_model(mdir, m, featurizer);
    FinalRow row;
    row.label = label;
    row.smoothing = smoothing;
    row.valid = *evaluate_samples(m.params, featurizer, corpus.valid, Split::kValid, k).labelled;
    row.test = *evaluate_samples(m.params, featurizer, corpus.test, Split::kTest, k).labelled;
    if (corpus.has_sd) row.sd = *evaluate_samples(m.params, featurizer, corpus.sd, Split::kSd, k).matches;
    write_eval_files(mdir, row.valid, row.test);
    if (row.sd) write_json(mdir / "eval_sd.json", match_to_json(*row.sd));
    result.rows.push_back(std::move(row));
  }

  Json rows = Json::array();
  std::ostringstream csv;
  csv << "label,variant,alpha,val_top1,val_topk,val_macro_f1,test_top1,test_topk,test_macro_f1,sd_top1_match,"
         "sd_topk_match\n";
  for (const FinalRow& r : result.rows) {
    rows.push_back(r.to_json());
    csv << r.label << ',' << variant_name(r.smoothing.variant) << ',' << format_double(r.smoothing.alpha) << ','
        << format_double(r.valid.top1_accuracy) << ',' << format_double(r.valid.topk_accuracy) << ','
        << format_double(r.valid.macro_f1) << ',' << format_double(r.test.top1_accuracy) << ','
        << format_double(r.test.topk_accuracy) << ',' << format_double(r.test.macro_f1) << ','
        << (r.sd ? format_double(r.sd->top1_match) : "") << ',' << (r.sd ? format_double(r.sd->topk_match) : "")
        << '\n';
  }
  write_json(dir / "final.json", Json{{"baseline", baseline_name(cfg.baseline)},
                                      {"setting", best.to_json()},
                                      {"seed", cfg.final_seed},
                                      {"partial", result.partial},
                                      {"rows", rows}});
  write_file(dir / "rows.csv", csv.str());
  Json inputs = step_inputs(cfg, corpus_hash(cfg.dataset));
  inputs["setting"] = best.to_json();
  inputs["chosen"] = sweep.chosen->to_json();
  write_manifest(dir, "final", cfg, step_key(inputs), inputs);
  return result;
}

}  // namespace ouvls
