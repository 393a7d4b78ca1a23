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

#include "lasas/harness/gradcheck_runner.hpp"

#include <map>

#include <nlohmann/json.hpp>

#include "lasas/harness/model.hpp"

namespace lasas::harness {

namespace {
constexpr std::uint64_t kBatchStream = 301;
constexpr std::size_t kFeatureDim = 6;
constexpr std::size_t kVocab = 7;
constexpr std::size_t kAccents = 3;
}  // namespace

nlohmann::json GradCheckReport::to_json() const {
  nlohmann::json mods = nlohmann::json::array();
  for (const auto& m : modules) {
    mods.push_back({{"module", m.module}, {"max_rel_error", m.max_rel_error}, {"worst_param", m.worst_param}});
  }
  return {{"threshold", threshold}, {"max_rel_error", max_rel_error}, {"worst_param", worst_param},
          {"passed", passed},       {"modules", mods}};
}

GradCheckReport run_gradcheck(const ExperimentConfig& cfg, Real threshold, const numerics::GradCheckOptions& opts) {
  ExperimentConfig c = cfg;
  c.variant = arhead::SystemVariant::kLasas;
  AccentModel model(c, kFeatureDim, kVocab, kAccents);

  numerics::Rng rng(numerics::derive_seed({cfg.seed, kBatchStream}));
  struct Item {
    Matrix frames;
    std::vector<SubwordId> ids;
    std::size_t label;
  };
  std::vector<Item> batch;
  for (std::size_t len : {5, 4}) {
    Item it{numerics::uniform_matrix(len, kFeatureDim, -1.0, 1.0, rng), {}, batch.size() % kAccents};
    for (std::size_t t = 0; t < len; ++t) it.ids.push_back(static_cast<SubwordId>(rng() % kVocab));
    batch.push_back(std::move(it));
  }
  const auto loss = [&](Tape& tape) {
    std::vector<Var> losses;
    for (const auto& it : batch) losses.push_back(tape.cross_entropy(model.forward(tape, it.frames, it.ids), it.label));
    return tape.sum(tape.concat_cols(losses));
  };
  const numerics::GradCheckResult r = numerics::finite_diff_check(loss, model.params(), opts);

  GradCheckReport report;
  report.threshold = threshold;
  std::map<std::string, ModuleGradCheck> by_module;
  for (const auto& p : r.per_param) {
    const std::string mod = p.name.substr(0, p.name.find('.'));
    auto& m = by_module[mod];
    m.module = mod;
    if (p.max_rel_error >= m.max_rel_error) {
      m.max_rel_error = p.max_rel_error;
      m.worst_param = p.name;
    }
  }
  for (const char* name : {"encoder", "lasas", "head"}) {
    if (by_module.count(name)) report.modules.push_back(by_module[name]);
  }
  report.max_rel_error = r.max_rel_error;
  report.worst_param = r.worst_param;
  report.passed = r.max_rel_error <= threshold;
  return report;
}

}  // namespace lasas::harness
