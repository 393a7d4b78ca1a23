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

#include "lasas/harness/ablation.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "lasas/errors.hpp"

namespace lasas::harness {

std::string to_string(AblationAxis axis) {
  switch (axis) {
    case AblationAxis::kSpaces: return "spaces";
    case AblationAxis::kVariant: return "variant";
    case AblationAxis::kTaps: return "taps";
    case AblationAxis::kCorruption: return "corruption";
  }
  return "unknown";
}

AblationAxis axis_from_string(const std::string& s) {
  if (s == "spaces" || s == "n" || s == "N") return AblationAxis::kSpaces;
  if (s == "variant") return AblationAxis::kVariant;
  if (s == "taps") return AblationAxis::kTaps;
  if (s == "corruption") return AblationAxis::kCorruption;
  throw ConfigError("unknown ablation axis '" + s + "' (expected spaces, variant, taps or corruption)");
}

std::vector<AblationSetting> ablation_settings(const ExperimentConfig& base, AblationAxis axis) {
  std::vector<AblationSetting> out;
  switch (axis) {
    case AblationAxis::kSpaces:
      for (std::size_t n : {2, 4, 8}) {
        ExperimentConfig c = base;
        c.variant = arhead::SystemVariant::kLasas;
        c.lasas.num_spaces = n;
        out.push_back({"N=" + std::to_string(n), c});
      }
      break;
    case AblationAxis::kVariant:
      for (auto v : {arhead::SystemVariant::kLasas, arhead::SystemVariant::kDirectConcat,
                     arhead::SystemVariant::kAcousticOnly}) {
        ExperimentConfig c = base;
        c.variant = v;
        out.push_back({arhead::to_string(v), c});
      }
      break;
    case AblationAxis::kTaps: {
      const std::size_t l = base.encoder.num_layers;
      const std::size_t third = std::max<std::size_t>(1, l / 3);
      auto range = [](std::size_t lo, std::size_t hi) {
        std::vector<std::size_t> t;
        for (std::size_t i = lo; i <= hi; ++i) t.push_back(i);
        return t;
      };
      const std::vector<std::pair<std::string, std::vector<std::size_t>>> sets{
          {"shallow", range(1, third)},
          {"middle", range(std::min(l, third + 1), std::min(l, 2 * third))},
          {"deep", range(std::min(l, 2 * third + 1), l)},
          {"all", range(1, l)}};
      for (const auto& [name, taps] : sets) {
        ExperimentConfig c = base;
        c.encoder.taps = taps;
        std::string label = name + "{";
        for (std::size_t i = 0; i < taps.size(); ++i) label += (i ? "," : "") + std::to_string(taps[i]);
        out.push_back({label + "}", c});
      }
      break;
    }
    case AblationAxis::kCorruption:
      for (auto [tr, ev] : std::vector<std::pair<Real, Real>>{{0.0, 0.0}, {0.0, 0.06}, {0.06, 0.06}}) {
        ExperimentConfig c = base;
        c.corruption = {tr, ev};
        char label[64];
        std::snprintf(label, sizeof label, "train=%.2f,eval=%.2f", tr, ev);
        out.push_back({label, c});
      }
      break;
  }
  return out;
}

const AblationRow& AblationTable::row(const std::string& label) const {
  for (const auto& r : rows)
    if (r.label == label) return r;
  throw ConfigError("ablation table has no row '" + label + "'");
}

nlohmann::json AblationTable::to_json() const {
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& rep : r.runs) {
      runs.push_back({{"seed", rep.config.seed}, {"dev_accuracy", rep.dev_accuracy}, {"test_accuracy", rep.test_accuracy}});
    }
    rs.push_back({{"setting", r.label}, {"mean", r.mean}, {"min", r.min}, {"max", r.max}, {"runs", runs}});
  }
  return {{"axis", to_string(axis)}, {"rows", rs}};
}

std::string AblationTable::to_markdown() const {
  std::string s = "| " + to_string(axis) + " | mean test acc | range | per seed |\n|---|---|---|---|\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "| %s | %.4f | [%.4f, %.4f] |", r.label.c_str(), r.mean, r.min, r.max);
    s += buf;
    for (const auto& rep : r.runs) {
      std::snprintf(buf, sizeof buf, " %.4f", rep.test_accuracy);
      s += buf;
    }
    s += " |\n";
  }
  return s;
}

AblationTable ablate(const ExperimentConfig& base, AblationAxis axis, const Runner& run, std::size_t seeds) {
  if (seeds == 0) throw ConfigError("ablate: need at least one seed");
  AblationTable table;
  table.axis = axis;
  for (const auto& setting : ablation_settings(base, axis)) {
    AblationRow row;
    row.label = setting.label;
    for (std::size_t k = 0; k < seeds; ++k) {
      ExperimentConfig c = setting.config;
      c.seed = base.seed + k;
      if (!base.output_dir.empty()) {
        c.output_dir = (std::filesystem::path(base.output_dir) / to_string(axis) / setting.label /
                        ("seed" + std::to_string(c.seed)))
                           .string();
      }
      row.runs.push_back(run(c));
    }
    row.min = row.max = row.runs.front().test_accuracy;
    for (const auto& r : row.runs) {
      row.mean += r.test_accuracy;
      row.min = std::min(row.min, r.test_accuracy);
      row.max = std::max(row.max, r.test_accuracy);
    }
    row.mean /= static_cast<Real>(row.runs.size());
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace lasas::harness
