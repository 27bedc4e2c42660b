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

#include "ouvls/ouvls.h"

#include <cstdlib>
#include <cstring>
#include <mutex>
#include <new>
#include <sstream>
#include <string>

#include "ouvls/error.hpp"
#include "ouvls/harness.hpp"
#include "ouvls/text.hpp"

namespace fs = std::filesystem;
using namespace ouvls;

struct ouvls_prior {
  CooccurrenceMatrix counts;
  PriorWeights mu;
};

struct ouvls_model {
  LoadedModel loaded;
};

namespace {

thread_local std::string g_last_error;

std::mutex g_log_mutex;
ouvls_log_fn g_log_fn = nullptr;
void* g_log_user = nullptr;

LogFn current_log() {
  std::lock_guard lock(g_log_mutex);
  if (!g_log_fn) return {};
  ouvls_log_fn fn = g_log_fn;
  void* user = g_log_user;
  return [fn, user](std::string_view line) {
    const std::string s(line);
    fn(s.c_str(), user);
  };
}

ouvls_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return OUVLS_ERR_INVALID_ARGUMENT;
    case ErrorCode::kDomain: return OUVLS_ERR_DOMAIN;
    case ErrorCode::kIo: return OUVLS_ERR_IO;
    case ErrorCode::kFormat: return OUVLS_ERR_FORMAT;
    case ErrorCode::kConfig: return OUVLS_ERR_CONFIG;
    case ErrorCode::kTraining: return OUVLS_ERR_TRAINING;
    case ErrorCode::kInternal: return OUVLS_ERR_INTERNAL;
  }
  return OUVLS_ERR_INTERNAL;
}

template <typename F>
ouvls_status guarded(F&& body) {
  g_last_error.clear();
  try {
    return body();
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return OUVLS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return OUVLS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return OUVLS_ERR_INTERNAL;
  }
}

void require(const void* p, const char* name) {
  if (p == nullptr) throw Error(ErrorCode::kInvalidArgument, std::string(name) + " must not be NULL");
}

void hand_out(const std::string& s, char** out) {
  if (out == nullptr) return;
  char* buf = static_cast<char*>(std::malloc(s.size() + 1));
  if (buf == nullptr) throw std::bad_alloc();
  std::memcpy(buf, s.data(), s.size());
  buf[s.size()] = '\0';
  *out = buf;
}

void copy_out(const std::vector<double>& v, double* out) { std::copy(v.begin(), v.end(), out); }

std::string dataset_near_model(const fs::path& model_path) {
  fs::path dir = fs::is_directory(model_path) ? model_path : model_path.parent_path();
  for (int up = 0; up < 2 && !dir.empty(); ++up, dir = dir.parent_path()) {
    const fs::path m = dir / "manifest.json";
    if (fs::exists(m)) {
      const std::string d = read_json(m).value("dataset", std::string());
      if (!d.empty()) return d;
    }
  }
  throw_config("no dataset recorded near " + model_path.string() + "; pass a data directory");
}

}  // namespace

extern "C" {

const char* ouvls_version(void) { return "0.1.0"; }

const char* ouvls_last_error(void) { return g_last_error.c_str(); }

void ouvls_free_string(char* s) { std::free(s); }

void ouvls_set_log(ouvls_log_fn fn, void* user) {
  std::lock_guard lock(g_log_mutex);
  g_log_fn = fn;
  g_log_user = user;
}

ouvls_status ouvls_soft_softmax(const double* z, size_t n, double* out) {
  return guarded([&] {
    require(z, "z");
    require(out, "out");
    copy_out(soft_softmax(std::span<const double>(z, n)), out);
    return OUVLS_OK;
  });
}

ouvls_status ouvls_softmax(const double* z, size_t n, double* out) {
  return guarded([&] {
    require(z, "z");
    require(out, "out");
    copy_out(softmax(std::span<const double>(z, n)), out);
    return OUVLS_OK;
  });
}

ouvls_status ouvls_epsilon_for_alpha(double alpha, int num_classes, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = epsilon_for_alpha(alpha, num_classes);
    return OUVLS_OK;
  });
}

ouvls_status ouvls_original_ls(const double* one_hot, size_t n, double epsilon, double* out) {
  return guarded([&] {
    require(one_hot, "one_hot");
    require(out, "out");
    copy_out(original_ls(std::span<const double>(one_hot, n), epsilon), out);
    return OUVLS_OK;
  });
}

ouvls_status ouvls_vanilla_smooth(const double* one_hot, size_t n, double alpha, double* out) {
  return guarded([&] {
    require(one_hot, "one_hot");
    require(out, "out");
    copy_out(vanilla_smooth(std::span<const double>(one_hot, n), alpha), out);
    return OUVLS_OK;
  });
}

ouvls_status ouvls_prior_from_dataset(const char* dataset_dir, ouvls_prior** out) {
  return guarded([&] {
    require(dataset_dir, "dataset_dir");
    require(out, "out");
    const CooccurrenceMatrix counts = prior_counts_from_dataset(dataset_dir);
    *out = new ouvls_prior{counts, prior_weights(counts)};
    return OUVLS_OK;
  });
}

ouvls_status ouvls_prior_load(const char* json_path, ouvls_prior** out) {
  return guarded([&] {
    require(json_path, "json_path");
    require(out, "out");
    const CooccurrenceMatrix counts = prior_from_json(read_json(json_path));
    *out = new ouvls_prior{counts, prior_weights(counts)};
    return OUVLS_OK;
  });
}

ouvls_status ouvls_prior_save(const ouvls_prior* prior, const char* json_path, const char* csv_path) {
  return guarded([&] {
    require(prior, "prior");
    require(json_path, "json_path");
    write_json(json_path, prior_to_json(prior->counts, prior->mu));
    if (csv_path != nullptr) write_file(csv_path, prior_to_csv(prior->counts, prior->mu));
    return OUVLS_OK;
  });
}

ouvls_status ouvls_prior_counts(const ouvls_prior* prior, long* counts) {
  return guarded([&] {
    require(prior, "prior");
    require(counts, "counts");
    for (int k = 0; k < kNumCriteria; ++k) {
      for (int l = 0; l < kNumCriteria; ++l) counts[k * kNumCriteria + l] = prior->counts.counts()[k][l];
    }
    return OUVLS_OK;
  });
}

ouvls_status ouvls_prior_mu(const ouvls_prior* prior, int k, double* mu) {
  return guarded([&] {
    require(prior, "prior");
    require(mu, "mu");
    if (k < 1 || k > kNumCriteria) throw_domain("criterion must be in 1..10");
    const LabelVector& v = prior->mu.mu(CriterionId(k));
    std::copy(v.begin(), v.end(), mu);
    return OUVLS_OK;
  });
}

void ouvls_prior_free(ouvls_prior* prior) { delete prior; }

ouvls_status ouvls_smooth(const double* one_hot, const double* parental, const ouvls_prior* prior,
                          const char* variant, double alpha, double* out) {
  return guarded([&] {
    require(one_hot, "one_hot");
    require(parental, "parental");
    require(variant, "variant");
    require(out, "out");
    LabelVector y{}, g{};
    std::copy(one_hot, one_hot + kNumClasses, y.begin());
    std::copy(parental, parental + kNumClasses, g.begin());
    const LabelVector r = smooth(y, ParentalLabel::from_values(g), prior ? &prior->mu : nullptr,
                                 SmoothingConfig{parse_variant(variant), alpha});
    std::copy(r.begin(), r.end(), out);
    return OUVLS_OK;
  });
}

ouvls_status ouvls_model_load(const char* path, ouvls_model** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new ouvls_model{load_model(path)};
    return OUVLS_OK;
  });
}

void ouvls_model_free(ouvls_model* model) { delete model; }

ouvls_status ouvls_model_input_dim(const ouvls_model* model, size_t* out) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    *out = model->loaded.featurizer.dimension();
    return OUVLS_OK;
  });
}

ouvls_status ouvls_model_predict(const ouvls_model* model, const char* sentence, int k, int* classes,
                                 double* confidences) {
  return guarded([&] {
    require(model, "model");
    require(sentence, "sentence");
    require(classes, "classes");
    require(confidences, "confidences");
    const std::vector<std::string> tokens = preprocess(sentence);
    if (tokens.empty()) throw_domain("sentence has no tokens");
    const auto ranked = predict_topk(model->loaded.model, model->loaded.featurizer, tokens, k);
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      classes[i] = ranked[i].criterion;
      confidences[i] = ranked[i].confidence;
    }
    return OUVLS_OK;
  });
}

ouvls_status ouvls_ingest(const char* csv_path, const char* out_dir, uint64_t seed, const char* definitions_path,
                          char** result_json) {
  return guarded([&] {
    require(csv_path, "csv_path");
    require(out_dir, "out_dir");
    std::optional<fs::path> defs;
    if (definitions_path != nullptr) defs = fs::path(definitions_path);
    const IngestSummary s = ingest(csv_path, out_dir, seed, defs, current_log());
    hand_out(s.to_json().dump(2), result_json);
    return OUVLS_OK;
  });
}

ouvls_status ouvls_train(const char* config_path, const char* baseline, char** result_json) {
  return guarded([&] {
    require(config_path, "config_path");
    if (!fs::exists(config_path)) throw_io(std::string("config file not found: ") + config_path);
    Json doc;
    try {
      doc = read_json(config_path);
    } catch (const Error& e) {
      throw_config(e.what());
    }
    if (baseline != nullptr) {
      if (!doc.is_object()) throw_config("config must be a JSON object");
      doc["baseline"] = baseline;
    }
    const ExperimentConfig cfg = ExperimentConfig::from_json(doc);
    const TrainOutcome t = run_train(cfg, current_log());
    Json r{{"directory", t.directory.string()},
           {"best_epoch", t.model.best_epoch},
           {"epochs", t.model.history.size()},
           {"valid", eval_to_json(t.valid)},
           {"test", eval_to_json(t.test)}};
    hand_out(r.dump(2), result_json);
    return OUVLS_OK;
  });
}

ouvls_status ouvls_grid(const char* config_path, char** result_json) {
  return guarded([&] {
    require(config_path, "config_path");
    const GridResult g = run_grid_search(ExperimentConfig::load(config_path), current_log());
    std::size_t failed = 0;
    for (const GridEntry& e : g.entries) failed += e.ok ? 0 : 1;
    hand_out(Json{{"settings", g.entries.size()}, {"failed", failed}, {"best", g.best.to_json()}}.dump(2),
             result_json);
    return OUVLS_OK;
  });
}

ouvls_status ouvls_sweep(const char* config_path, char** result_json) {
  return guarded([&] {
    require(config_path, "config_path");
    const SweepResult s = run_ls_sweep(ExperimentConfig::load(config_path), current_log());
    hand_out(s.to_json().dump(2), result_json);
    return OUVLS_OK;
  });
}

ouvls_status ouvls_final(const char* config_path, char** result_json) {
  return guarded([&] {
    require(config_path, "config_path");
    const FinalResult f = run_final(ExperimentConfig::load(config_path), current_log());
    Json rows = Json::array();
    for (const FinalRow& r : f.rows) rows.push_back(r.to_json());
    hand_out(Json{{"partial", f.partial}, {"rows", rows}}.dump(2), result_json);
    return f.partial ? OUVLS_PARTIAL : OUVLS_OK;
  });
}

ouvls_status ouvls_evaluate(const char* model_path, const char* split, const char* data_dir, char** result_json) {
  return guarded([&] {
    require(model_path, "model_path");
    require(split, "split");
    const Split which = parse_split(split);
    if (which == Split::kTrain) throw_config("evaluate takes valid, test or sd");
    const LoadedModel m = load_model(model_path);
    const fs::path data = data_dir != nullptr ? fs::path(data_dir) : fs::path(dataset_near_model(model_path));
    const Corpus corpus = load_corpus(data);
    if (which == Split::kSd && !corpus.has_sd) throw_io("dataset " + data.string() + " has no sd.jsonl");
    const SplitEvaluation ev =
        evaluate_samples(m.model.params, m.featurizer, corpus.split(which), which, m.model.config.topk);
    const Json r = ev.labelled ? eval_to_json(*ev.labelled) : match_to_json(*ev.matches);
    hand_out(r.dump(2), result_json);
    return OUVLS_OK;
  });
}

ouvls_status ouvls_mine(const char* model_a, const char* model_b, const char* input_path,
                        double confidence_threshold, double iou_threshold, const char* output_path,
                        char** result_jsonl) {
  return guarded([&] {
    require(model_a, "model_a");
    require(model_b, "model_b");
    require(input_path, "input_path");
    if (std::strcmp(model_a, model_b) == 0) throw_config("mine needs two distinct models");
    const LoadedModel a = load_model(model_a);
    const LoadedModel b = load_model(model_b);
    std::vector<std::string> lines;
    std::istringstream in(read_file(input_path));
    for (std::string line; std::getline(in, line);) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(line);
    }
    std::string out;
    for (const MinedSentence& s : mine(lines, a, b, confidence_threshold, iou_threshold)) {
      out += s.to_json().dump() + "\n";
    }
    if (output_path != nullptr) write_file(output_path, out);
    hand_out(out, result_jsonl);
    return OUVLS_OK;
  });
}

ouvls_status ouvls_report(const char* dir, char** result_text) {
  return guarded([&] {
    require(dir, "dir");
    hand_out(report(dir).text, result_text);
    return OUVLS_OK;
  });
}

}  // extern "C"
