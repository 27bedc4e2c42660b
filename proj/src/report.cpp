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
#include <cstdio>
#include <sstream>

#include "ouvls/error.hpp"
#include "ouvls/harness.hpp"

namespace ouvls {
namespace fs = std::filesystem;

namespace {

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pct(const Json& v) { return v.is_number() ? fixed(100.0 * v.get<double>(), 2) : std::string("-"); }

bool is_run_dir(const fs::path& d) {
  return fs::exists(d / "train" / "model.json") || fs::exists(d / "grid" / "best_setting.json") ||
         fs::exists(d / "sweep" / "sweep_result.json") || fs::exists(d / "final" / "final.json");
}

std::string baseline_of(const fs::path& d) {
  for (const char* step : {"final", "sweep", "grid", "train"}) {
    const fs::path m = d / step / "manifest.json";
    if (fs::exists(m)) return read_json(m).value("baseline", std::string("unknown"));
  }
  return "unknown";
}

void add_curve(std::ostringstream& csv, const std::string& run, const std::string& model, const fs::path& history) {
  if (!fs::exists(history)) return;
  std::istringstream in(read_file(history));
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (!line.empty()) csv << run << ',' << model << ',' << line << '\n';
  }
}

}  // namespace

ReportOutput report(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw_io("report directory not found: " + dir.string());
  std::vector<fs::path> runs;
  if (is_run_dir(dir)) runs.push_back(dir);
  std::vector<fs::path> children;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory() && is_run_dir(entry.path())) children.push_back(entry.path());
  }
  std::sort(children.begin(), children.end());
  runs.insert(runs.end(), children.begin(), children.end());
  if (runs.empty()) {
    throw_io("no run artifacts under " + dir.string() +
             "; expected any of train/model.json, grid/best_setting.json, sweep/sweep_result.json, "
             "final/final.json (in the directory or one level below)");
  }

  ReportOutput out;
  std::ostringstream text;
  std::ostringstream curves;
  curves << "run,model,epoch,train_loss,val_top1,val_topk\n";
  Json all = Json::array();
  for (const fs::path& run : runs) {
    const std::string name = run == dir ? std::string(".") : run.filename().string();
    Json summary;
    summary["run"] = name;
    summary["baseline"] = baseline_of(run);
    text << "== " << name << " (" << summary["baseline"].get<std::string>() << ")\n";

    if (fs::exists(run / "train" / "model.json")) {
      const Json model = read_json(run / "train" / "model.json");
      Json t{{"best_epoch", model.at("best_epoch")}, {"epochs", model.at("history").size()}};
      if (fs::exists(run / "train" / "eval.json")) {
        const Json ev = read_json(run / "train" / "eval.json");
        for (const char* split : {"valid", "test"}) {
          t[split] = {{"top1", ev[split]["top1_accuracy"]},
                      {"topk", ev[split]["topk_accuracy"]},
                      {"macro_f1", ev[split]["macro_f1"]}};
        }
        text << "train   best epoch " << t["best_epoch"].get<int>() << " | val top1 " << pct(t["valid"]["top1"])
             << " topk " << pct(t["valid"]["topk"]) << " F1 " << pct(t["valid"]["macro_f1"]) << " | test top1 "
             << pct(t["test"]["top1"]) << " topk " << pct(t["test"]["topk"]) << " F1 "
             << pct(t["test"]["macro_f1"]) << "\n";
      }
      summary["train"] = std::move(t);
      add_curve(curves, name, "train", run / "train" / "history.csv");
    }

    if (fs::exists(run / "grid" / "best_setting.json")) {
      const Json best = read_json(run / "grid" / "best_setting.json");
      summary["grid"] = best;
      text << "grid    best val topk " << pct(best.at("val_topk")) << " with " << best.at("setting").dump() << "\n";
    }

    if (fs::exists(run / "sweep" / "sweep_result.json")) {
      const SweepResult sweep = SweepResult::from_json(read_json(run / "sweep" / "sweep_result.json"));
      Json cells = Json::array();
      text << "sweep   variant   alpha   n   top1 mean +- ci      topk mean +- ci      score\n";
      for (const SweepCell& c : sweep.cells) {
        const double n = static_cast<double>(c.completed);
        const double ci1 = c.completed > 1 ? 1.96 * c.sd_top1 / std::sqrt(n) : 0.0;
        const double cik = c.completed > 1 ? 1.96 * c.sd_topk / std::sqrt(n) : 0.0;
        Json row = c.to_json();
        row["ci_top1"] = ci1;
        row["ci_topk"] = cik;
        cells.push_back(row);
        char line[256];
        std::snprintf(line, sizeof line, "        %-8s  %-6s  %-2zu  %6.2f +- %5.2f      %6.2f +- %5.2f      %s\n",
                      std::string(variant_name(c.variant)).c_str(), format_double(c.alpha).c_str(), c.completed,
                      100.0 * c.mean_top1, 100.0 * ci1, 100.0 * c.mean_topk, 100.0 * cik,
                      c.eligible ? fixed(c.score).c_str() : "n/a");
        text << line;
      }
      summary["sweep"] = {{"cells", cells}, {"chosen", sweep.chosen ? sweep.chosen->to_json() : Json(nullptr)}};
      if (sweep.chosen) {
        text << "        chosen " << variant_name(sweep.chosen->variant) << " alpha "
             << format_double(sweep.chosen->alpha) << "\n";
      }
    }

    if (fs::exists(run / "final" / "final.json")) {
      const Json fin = read_json(run / "final" / "final.json");
      summary["final"] = fin;
      text << "final   row    variant  alpha  | val top1  topk    F1    | test top1 topk    F1    | sd top1 topk\n";
      for (const Json& r : fin.at("rows")) {
        char line[256];
        std::snprintf(line, sizeof line,
                      "        %-6s %-8s %-6s | %6s %6s %6s | %6s %6s %6s | %6s %6s\n",
                      r.at("label").get<std::string>().c_str(), r.at("variant").get<std::string>().c_str(),
                      format_double(r.at("alpha").get<double>()).c_str(), pct(r.at("val_top1")).c_str(),
                      pct(r.at("val_topk")).c_str(), pct(r.at("val_macro_f1")).c_str(),
                      pct(r.at("test_top1")).c_str(), pct(r.at("test_topk")).c_str(),
                      pct(r.at("test_macro_f1")).c_str(), pct(r.at("sd_top1_match")).c_str(),
                      pct(r.at("sd_topk_match")).c_str());
        text << line;
        add_curve(curves, name, "final/" + r.at("label").get<std::string>(),
                  run / "final" / r.at("label").get<std::string>() / "history.csv");
      }
      if (fin.value("partial", false)) text << "        (SD set missing; match metrics omitted)\n";
    }
    text << "\n";
    all.push_back(std::move(summary));
  }
  out.text = text.str();
  out.summary = Json{{"runs", all}};
  out.curves_csv = curves.str();
  write_json(dir / "report.json", out.summary);
  write_file(dir / "report.txt", out.text);
  write_file(dir / "curves.csv", out.curves_csv);
  return out;
}

}  // namespace ouvls
