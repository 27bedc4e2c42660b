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

// Command-line front end. Talks to the library only through ouvls/ouvls.h.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ouvls/ouvls.h"

namespace {

void log_to_stderr(const char* line, void*) { std::fprintf(stderr, "%s\n", line); }

int finish(ouvls_status st, char* output) {
  if (output != nullptr) {
    std::fputs(output, stdout);
    if (output[0] != '\0' && output[std::char_traits<char>::length(output) - 1] != '\n') std::fputc('\n', stdout);
    ouvls_free_string(output);
  }
  if (st == OUVLS_OK) return 0;
  if (st == OUVLS_PARTIAL) {
    std::fprintf(stderr, "warning: partial result\n");
    return 2;
  }
  std::fprintf(stderr, "error: %s\n", ouvls_last_error());
  return 1;
}

const char* or_null(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soft-label criterion classification for heritage justification texts"};
  app.set_version_flag("--version", std::string(ouvls_version()));
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Suppress progress output");

  std::string csv, out, definitions, dataset, config, baseline, model, split, data, input, output_file, dir;
  std::uint64_t seed = 1337;
  std::vector<std::string> models;
  double confidence = 0.8;
  double iou = 0.5;

  auto* ingest = app.add_subcommand("ingest", "Build the sentence dataset from a syndication export");
  ingest->add_option("csv", csv, "Syndication CSV")->required();
  ingest->add_option("--out", out, "Output dataset directory")->required();
  ingest->add_option("--seed", seed, "Split seed");
  ingest->add_option("--definitions", definitions, "JSON file of criterion definitions");

  auto* prior = app.add_subcommand("prior", "Write the criterion co-occurrence prior");
  prior->add_option("dataset", dataset, "Dataset directory")->required();
  prior->add_option("--out", out, "Output JSON file (a .csv rendering is written alongside)")->required();

  auto* train = app.add_subcommand("train", "Train one model with the configured setting");
  train->add_option("--baseline", baseline, "ngram or boe (overrides the config)")
      ->check(CLI::IsMember({"ngram", "boe"}));
  train->add_option("--config", config, "Experiment config JSON")->required();

  auto* grid = app.add_subcommand("grid", "Step 1: hyperparameter grid search");
  grid->add_option("--config", config, "Experiment config JSON")->required();

  auto* sweep = app.add_subcommand("sweep", "Step 2: label-smoothing sweep over seeds");
  sweep->add_option("--config", config, "Experiment config JSON")->required();

  auto* final_cmd = app.add_subcommand("final", "Step 3: final models with and without smoothing");
  final_cmd->add_option("--config", config, "Experiment config JSON")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a checkpoint on one split");
  evaluate->add_option("--model", model, "Checkpoint file or directory")->required();
  evaluate->add_option("--split", split, "valid, test or sd")->required()->check(CLI::IsMember({"valid", "test", "sd"}));
  evaluate->add_option("--data", data, "Dataset directory");

  auto* mine = app.add_subcommand("mine", "Keep sentences two models agree on");
  mine->add_option("--models", models, "Two checkpoints")->required()->expected(2);
  mine->add_option("--input", input, "Text file, one sentence per line")->required();
  mine->add_option("--confidence", confidence, "Top-3 confidence threshold");
  mine->add_option("--iou", iou, "Top-3 IoU threshold");
  mine->add_option("--out", output_file, "Also write kept sentences to this JSONL file");

  auto* report = app.add_subcommand("report", "Summarize run artifacts");
  report->add_option("dir", dir, "Run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (!quiet) ouvls_set_log(log_to_stderr, nullptr);

  char* text = nullptr;
  if (*ingest) return finish(ouvls_ingest(csv.c_str(), out.c_str(), seed, or_null(definitions), &text), text);
  if (*prior) {
    ouvls_prior* p = nullptr;
    ouvls_status st = ouvls_prior_from_dataset(dataset.c_str(), &p);
    if (st == OUVLS_OK) {
      const std::string csv_out = std::filesystem::path(out).replace_extension(".csv").string();
      st = ouvls_prior_save(p, out.c_str(), csv_out == out ? nullptr : csv_out.c_str());
      ouvls_prior_free(p);
    }
    return finish(st, nullptr);
  }
  if (*train) return finish(ouvls_train(config.c_str(), or_null(baseline), &text), text);
  if (*grid) return finish(ouvls_grid(config.c_str(), &text), text);
  if (*sweep) return finish(ouvls_sweep(config.c_str(), &text), text);
  if (*final_cmd) return finish(ouvls_final(config.c_str(), &text), text);
  if (*evaluate) return finish(ouvls_evaluate(model.c_str(), split.c_str(), or_null(data), &text), text);
  if (*mine) {
    return finish(ouvls_mine(models[0].c_str(), models[1].c_str(), input.c_str(), confidence, iou,
                             or_null(output_file), &text),
                  text);
  }
  if (*report) return finish(ouvls_report(dir.c_str(), &text), text);
  return 1;
}
