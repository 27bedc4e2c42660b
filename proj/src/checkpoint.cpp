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

#include <sstream>
#include <string>

#include "ouvls/error.hpp"
#include "ouvls/model.hpp"

namespace ouvls {
namespace fs = std::filesystem;

namespace {

constexpr std::string_view kFormatTag = "ouvls-mlp-v1";
constexpr std::string_view kModelFile = "model.json";
constexpr std::string_view kHistoryFile = "history.csv";

Json tensor_to_json(const Eigen::MatrixXd& m) {
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  }
  return Json{{"shape", {m.rows(), m.cols()}}, {"data", std::move(data)}};
}

Eigen::MatrixXd tensor_from_json(const Json& doc, const char* name) {
  const Json& shape = doc.at("shape");
  const Json& data = doc.at("data");
  if (!shape.is_array() || shape.size() != 2) throw_format(std::string(name) + ": bad shape");
  const auto rows = shape[0].get<Eigen::Index>();
  const auto cols = shape[1].get<Eigen::Index>();
  if (rows < 0 || cols < 0 || data.size() != static_cast<std::size_t>(rows * cols)) {
    throw_format(std::string(name) + ": data length does not match shape");
  }
  Eigen::MatrixXd m(rows, cols);
  std::size_t i = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[i++].get<double>();
  }
  return m;
}

}  // namespace

std::string history_to_csv(std::span<const EpochRecord> history) {
  std::ostringstream out;
  out << "epoch,train_loss,val_top1,val_topk\n";
  for (const EpochRecord& e : history) {
    out << e.epoch << ',' << format_double(e.train_loss) << ',' << format_double(e.val_top1)
        << ',' << format_double(e.val_topk) << '\n';
  }
  return out.str();
}

Json model_to_json(const TrainedModel& model) {
  Json doc;
  doc["format"] = kFormatTag;
  doc["config"] = model.config.to_json();
  doc["featurizer_ref"] = model.featurizer_ref.to_json();
  doc["best_epoch"] = model.best_epoch;
  Json params;
  params["w1"] = tensor_to_json(model.params.w1);
  params["b1"] = tensor_to_json(model.params.b1);
  params["w2"] = tensor_to_json(model.params.w2);
  params["b2"] = tensor_to_json(model.params.b2);
  doc["params"] = std::move(params);
  Json history = Json::array();
  for (const EpochRecord& e : model.history) {
    history.push_back({{"epoch", e.epoch},
                       {"train_loss", e.train_loss},
                       {"val_top1", e.val_top1},
                       {"val_topk", e.val_topk}});
  }
  doc["history"] = std::move(history);
  return doc;
}

TrainedModel model_from_json(const Json& doc) {
  try {
    if (doc.value("format", std::string()) != kFormatTag) throw_format("not an ouvls model checkpoint");
    TrainedModel m;
    m.config = TrainConfig::from_json(doc.at("config"));
    m.featurizer_ref = FeaturizerRef::from_json(doc.at("featurizer_ref"));
    m.best_epoch = doc.at("best_epoch").get<int>();
    const Json& p = doc.at("params");
    m.params.w1 = tensor_from_json(p.at("w1"), "w1");
    m.params.b1 = tensor_from_json(p.at("b1"), "b1");
    m.params.w2 = tensor_from_json(p.at("w2"), "w2");
    m.params.b2 = tensor_from_json(p.at("b2"), "b2");
    const auto h = m.params.hidden_dim();
    if (m.params.b1.size() != static_cast<Eigen::Index>(h) || m.params.w2.rows() != kNumClasses ||
        m.params.w2.cols() != static_cast<Eigen::Index>(h) || m.params.b2.size() != kNumClasses) {
      throw_format("inconsistent parameter shapes");
    }
    if (!m.params.all_finite()) throw_format("checkpoint holds non-finite parameters");
    for (const Json& e : doc.at("history")) {
      m.history.push_back({e.at("epoch").get<int>(), e.at("train_loss").get<double>(),
                           e.at("val_top1").get<double>(), e.at("val_topk").get<double>()});
    }
    return m;
  } catch (const Json::exception& e) {
    throw_format(std::string("bad model checkpoint: ") + e.what());
  }
}

void save_model(const fs::path& dir, TrainedModel& model, const Featurizer& featurizer) {
  model.featurizer_ref = featurizer.save(dir);
  write_json(dir / kModelFile, model_to_json(model));
  write_file(dir / kHistoryFile, history_to_csv(model.history));
}

LoadedModel load_model(const fs::path& path) {
  const fs::path file = fs::is_directory(path) ? path / kModelFile : path;
  if (!fs::exists(file)) throw_io("model checkpoint not found: " + file.string());
  TrainedModel m = model_from_json(read_json(file));
  const fs::path dir = file.parent_path();
  Featurizer f = Featurizer::load(m.featurizer_ref, dir);
  if (f.dimension() != m.params.input_dim()) {
    throw_format("featurizer dimension does not match the checkpoint");
  }
  return LoadedModel{std::move(m), std::move(f), dir};
}

}  // namespace ouvls
