// Copyright 2026 The LASAS Authors
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

#include "lasas/harness/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "lasas/errors.hpp"

namespace lasas::harness {

namespace {

void reject_unknown(const nlohmann::json& doc, const std::set<std::string>& allowed, const std::string& where) {
  if (!doc.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (allowed.count(key) == 0) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

}  // namespace

void ExperimentConfig::validate(bool check_files) const {
  encoder.validate();
  lasas.validate();
  head.validate();
  if (!(optimizer.lr >= 0.0)) throw ConfigError("optimizer.lr must be >= 0");
  if (optimizer.epochs == 0) throw ConfigError("optimizer.epochs must be positive");
  if (optimizer.batch_size == 0) throw ConfigError("optimizer.batch_size must be positive");
  for (Real p : {corruption.train, corruption.eval}) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("corruption rates must lie in [0, 1]");
  }
  if (check_files) {
    if (data.empty()) throw ConfigError("config: 'data' (corpus manifest path) is required");
    if (!std::filesystem::exists(data)) throw ConfigError("config: data manifest not found: " + data);
  }
}

nlohmann::json ExperimentConfig::to_json() const {
  return {{"data", data},
          {"variant", arhead::to_string(variant)},
          {"encoder", encoder.to_json()},
          {"lasas", lasas.to_json()},
          {"head", head.to_json()},
          {"optimizer", {{"lr", optimizer.lr}, {"epochs", optimizer.epochs}, {"batch_size", optimizer.batch_size}}},
          {"corruption", {{"train", corruption.train}, {"eval", corruption.eval}}},
          {"seed", seed},
          {"output_dir", output_dir}};
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& doc) {
  reject_unknown(doc, {"data", "variant", "encoder", "lasas", "head", "optimizer", "corruption", "seed", "output_dir"},
                 "config");
  ExperimentConfig c;
  try {
    if (doc.contains("data")) c.data = doc.at("data").get<std::string>();
    if (doc.contains("variant")) c.variant = arhead::variant_from_string(doc.at("variant").get<std::string>());
    if (doc.contains("encoder")) {
      reject_unknown(doc.at("encoder"), {"num_layers", "d_model", "heads", "ff_dim", "taps"}, "encoder");
      c.encoder = encoder::EncoderConfig::from_json(doc.at("encoder"));
    }
    if (doc.contains("lasas")) {
      reject_unknown(doc.at("lasas"), {"num_spaces", "hidden_dim", "text_dim", "space_dim_mode"}, "lasas");
      c.lasas = accent_shift::LasasConfig::from_json(doc.at("lasas"));
    }
    if (doc.contains("head")) {
      reject_unknown(doc.at("head"), {"context_layers", "context_dim", "heads", "ff_dim", "dnn_layers", "num_accents"},
                     "head");
      c.head = arhead::HeadConfig::from_json(doc.at("head"));
    }
    if (doc.contains("optimizer")) {
      const auto& o = doc.at("optimizer");
      reject_unknown(o, {"lr", "epochs", "batch_size"}, "optimizer");
      if (o.contains("lr")) c.optimizer.lr = o.at("lr").get<Real>();
      if (o.contains("epochs")) c.optimizer.epochs = o.at("epochs").get<std::size_t>();
      if (o.contains("batch_size")) c.optimizer.batch_size = o.at("batch_size").get<std::size_t>();
    }
    if (doc.contains("corruption")) {
      const auto& o = doc.at("corruption");
      reject_unknown(o, {"train", "eval"}, "corruption");
      if (o.contains("train")) c.corruption.train = o.at("train").get<Real>();
      if (o.contains("eval")) c.corruption.eval = o.at("eval").get<Real>();
    }
    if (doc.contains("seed")) c.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("output_dir")) c.output_dir = doc.at("output_dir").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  return from_json(doc);
}

}  // namespace lasas::harness
