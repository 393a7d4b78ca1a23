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

#include "doctest.h"
#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lasas/errors.hpp"
#include "lasas/harness/ablation.hpp"
#include "lasas/harness/analysis.hpp"
#include "lasas/harness/gradcheck_runner.hpp"
#include "lasas/harness/trainer.hpp"
#include "pca_oracle.hpp"
#include "test_util.hpp"

using namespace lasas;
using namespace lasas::harness;
using lasas::testing::random_matrix;
using numerics::Rng;

namespace {

synthgen::CorpusConfig tiny_corpus_config() {
  synthgen::CorpusConfig c;
  c.num_accents = 2;
  c.train_speakers = 2;
  c.dev_speakers = 1;
  c.test_speakers = 1;
  c.utterances_per_speaker = 3;
  c.lexicon_size = 12;
  c.num_merges = 6;
  c.min_words = 1;
  c.max_words = 2;
  c.feature_dim = 4;
  c.seed = 5;
  return c;
}

ExperimentConfig tiny_experiment() {
  ExperimentConfig c;
  c.encoder.num_layers = 2;
  c.encoder.d_model = 8;
  c.encoder.heads = 2;
  c.encoder.ff_dim = 8;
  c.encoder.taps = {1, 2};
  c.lasas.num_spaces = 2;
  c.lasas.hidden_dim = 4;
  c.lasas.text_dim = 2;
  c.head.context_layers = 1;
  c.head.context_dim = 8;
  c.head.heads = 2;
  c.head.ff_dim = 8;
  c.head.dnn_layers = 2;
  c.optimizer.epochs = 2;
  c.optimizer.batch_size = 4;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Real pairwise(const Matrix& m, std::size_t i, std::size_t j) {
  Real s = 0.0;
  for (std::size_t c = 0; c < m.cols(); ++c) s += (m(i, c) - m(j, c)) * (m(i, c) - m(j, c));
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("pca: collinear points have a zero second coordinate") {
  Matrix x(6, 3);
  for (std::size_t i = 0; i < 6; ++i) {
    const Real t = static_cast<Real>(i) - 2.5;
    x(i, 0) = 1.0 + 2.0 * t;
    x(i, 1) = -t;
    x(i, 2) = 0.5 * t;
  }
  const PcaResult p = pca_project(x, 2);
  for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(p.coords(i, 1)) <= 1e-6);
  CHECK(p.eigenvalues[1] <= 1e-9);
}

TEST_CASE("pca: full-rank 2-D input is rotated, distances kept") {
  Rng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix x = random_matrix(8, 2, rng, 3.0);
    const PcaResult p = pca_project(x, 2);
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = i + 1; j < 8; ++j) CHECK(std::abs(pairwise(x, i, j) - pairwise(p.coords, i, j)) <= 1e-6);
    CHECK(p.eigenvalues[0] >= p.eigenvalues[1]);
  }
}

TEST_CASE("pca: eigenvalues match the closed-form 3x3 solution") {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix x = random_matrix(12, 3, rng, 2.0);
    for (std::size_t i = 0; i < 12; ++i) x(i, 1) += 0.7 * x(i, 0);  // correlated columns
    const auto oracle = testing::symmetric_eigenvalues_3x3(testing::covariance(x));
    const PcaResult p = pca_project(x, 3);
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(p.eigenvalues[k] - oracle[k]) <= 1e-8);
  }
}

TEST_CASE("pca: sign convention, rank-0 input and preconditions") {
  Rng rng(3);
  const PcaResult p = pca_project(random_matrix(7, 4, rng), 2);
  for (std::size_t d = 0; d < 2; ++d) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (std::abs(p.components(d, j)) > 1e-12) {
        CHECK(p.components(d, j) > 0.0);
        break;
      }
    }
  }
  const PcaResult z = pca_project(Matrix(5, 3, 2.5), 2);
  CHECK(z.coords == Matrix(5, 2));
  CHECK_THROWS_AS(pca_project(Matrix(1, 3), 2), DimensionError);
}

TEST_CASE("shift geometry summary") {
  accent_shift::MeanShiftTable t;
  t.num_spaces = 2;
  // subword 1 shifted: centroids far apart; subword 2 unshifted: close.
  t.centroids[{1, 0}] = {0, 0};
  t.centroids[{1, 1}] = {3, 4};
  t.centroids[{2, 0}] = {1, 1};
  t.centroids[{2, 1}] = {1, 2};
  t.centroids[{3, 0}] = {0, 0};  // one accent only: skipped
  const auto spreads = centroid_spreads(t, {1, 3});
  REQUIRE(spreads.size() == 2);
  CHECK(spreads[0].spread == 5.0);
  CHECK(spreads[1].spread == 1.0);
  const auto g = shift_geometry(spreads, 2.0);
  CHECK(g.unshifted_mean_spread == 1.0);
  CHECK(g.shifted_total == 1);
  CHECK(g.passing_fraction == 1.0);
}

TEST_CASE("experiment config json round trip and validation") {
  ExperimentConfig c = tiny_experiment();
  c.variant = arhead::SystemVariant::kDirectConcat;
  c.corruption = {0.06, 0.06};
  c.seed = 42;
  const ExperimentConfig d = ExperimentConfig::from_json(c.to_json());
  CHECK(d.to_json() == c.to_json());
  CHECK_THROWS_AS(ExperimentConfig::from_json(nlohmann::json{{"sead", 1}}), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(nlohmann::json{{"optimizer", {{"lr", "fast"}}}}), ConfigError);
  ExperimentConfig bad = c;
  bad.corruption.train = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.data = "/nonexistent/manifest.json";
  CHECK_THROWS_AS(bad.validate(true), ConfigError);
}

TEST_CASE("ablation settings") {
  const ExperimentConfig base = tiny_experiment();
  CHECK(ablation_settings(base, AblationAxis::kSpaces).size() == 3);
  CHECK(ablation_settings(base, AblationAxis::kSpaces)[2].config.lasas.num_spaces == 8);
  const auto v = ablation_settings(base, AblationAxis::kVariant);
  CHECK(v[1].config.variant == arhead::SystemVariant::kDirectConcat);
  ExperimentConfig six = base;
  six.encoder.num_layers = 6;
  const auto taps = ablation_settings(six, AblationAxis::kTaps);
  REQUIRE(taps.size() == 4);
  CHECK(taps[0].config.encoder.taps == std::vector<std::size_t>{1, 2});
  CHECK(taps[1].config.encoder.taps == std::vector<std::size_t>{3, 4});
  CHECK(taps[2].config.encoder.taps == std::vector<std::size_t>{5, 6});
  CHECK(taps[3].config.encoder.taps.size() == 6);
  for (const auto& s : taps) CHECK_NOTHROW(s.config.validate());
  const auto corr = ablation_settings(base, AblationAxis::kCorruption);
  CHECK(corr[2].config.corruption.train == 0.06);
  CHECK(axis_from_string("n") == AblationAxis::kSpaces);
  CHECK_THROWS_AS(axis_from_string("depth"), ConfigError);

  // mean and range over seeds, with a stub runner
  std::size_t calls = 0;
  const auto table = ablate(base, AblationAxis::kVariant, [&](const ExperimentConfig& c) {
    RunReport r;
    r.config = c;
    r.test_accuracy = 0.5 + 0.1 * static_cast<Real>(c.seed - base.seed);
    ++calls;
    return r;
  });
  CHECK(calls == 9);
  CHECK(table.row("lasas").mean == doctest::Approx(0.6));
  CHECK(table.row("lasas").min == 0.5);
  CHECK(table.row("lasas").max == doctest::Approx(0.7));
  CHECK(table.to_markdown().find("| lasas | 0.6000 | [0.5000, 0.7000] |") != std::string::npos);
}

TEST_CASE("training: determinism, zero learning rate, reports and checkpoints") {
  const auto corpus = synthgen::make_corpus(tiny_corpus_config());
  const auto dir = std::filesystem::temp_directory_path() / "lasas_harness_test";
  std::filesystem::remove_all(dir);

  for (auto v : {arhead::SystemVariant::kLasas, arhead::SystemVariant::kDirectConcat,
                 arhead::SystemVariant::kAcousticOnly}) {
    ExperimentConfig c = tiny_experiment();
    c.variant = v;
    c.output_dir = (dir / ("a_" + arhead::to_string(v))).string();
    const RunReport a = train(c, corpus);
    c.output_dir = (dir / ("b_" + arhead::to_string(v))).string();
    const RunReport b = train(c, corpus);
    CHECK(a.epochs.size() == 2);
    CHECK(a.test_accuracy >= 0.0);
    CHECK(a.test_accuracy <= 1.0);
    CHECK(a.epochs[0].train_loss == b.epochs[0].train_loss);
    CHECK(a.test_accuracy == b.test_accuracy);
    const std::string ra = slurp(std::filesystem::path(a.config.output_dir) / "report.json");
    const std::string rb = slurp(std::filesystem::path(b.config.output_dir) / "report.json");
    // reports differ only in their own paths
    CHECK(nlohmann::json::parse(ra)["test_accuracy"] == nlohmann::json::parse(rb)["test_accuracy"]);
    CHECK(slurp(std::filesystem::path(a.config.output_dir) / "checkpoint.json") ==
          slurp(std::filesystem::path(b.config.output_dir) / "checkpoint.json"));
    CHECK(std::filesystem::exists(std::filesystem::path(a.config.output_dir) / "timing.json"));
  }

  // lr = 0 leaves the untrained weights, so every epoch scores the same as initialization
  ExperimentConfig z = tiny_experiment();
  z.optimizer.lr = 0.0;
  std::unique_ptr<AccentModel> model;
  const RunReport r = train(z, corpus, &model);
  AccentModel fresh(z, corpus.world.config.feature_dim, corpus.world.vocab_size(), corpus.world.config.num_accents);
  for (std::size_t i = 0; i < fresh.params().size(); ++i) CHECK(fresh.params()[i]->value == model->params()[i]->value);
  for (const auto& e : r.epochs) CHECK(e.dev_accuracy == r.epochs.front().dev_accuracy);
  CHECK(r.best_epoch == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("checkpoints round trip and reject mismatches") {
  const auto corpus = synthgen::make_corpus(tiny_corpus_config());
  const ExperimentConfig c = tiny_experiment();
  AccentModel a(c, 4, corpus.world.vocab_size(), 2);
  ExperimentConfig c2 = c;
  c2.seed = 99;
  AccentModel b(c2, 4, corpus.world.vocab_size(), 2);
  const auto doc = checkpoint_to_json(a.params());
  load_checkpoint(doc, b.params());
  for (std::size_t i = 0; i < a.params().size(); ++i) CHECK(a.params()[i]->value == b.params()[i]->value);

  auto wrong = doc;
  wrong["version"] = 99;
  CHECK_THROWS_AS(load_checkpoint(wrong, b.params()), IoError);
  ExperimentConfig c3 = c;
  c3.lasas.num_spaces = 4;
  AccentModel d(c3, 4, corpus.world.vocab_size(), 2);
  CHECK_THROWS_AS(load_checkpoint(doc, d.params()), IoError);
}

TEST_CASE("shift export: zero acoustic maps give zero coordinates, one row per observed pair") {
  const auto corpus = synthgen::make_corpus(tiny_corpus_config());
  AccentModel m(tiny_experiment(), 4, corpus.world.vocab_size(), 2);
  for (auto& w : m.lasas()->acoustic_maps) w.value.fill(0.0);
  const auto dir = std::filesystem::temp_directory_path() / "lasas_viz_test";
  const ShiftViz viz = export_shift_viz(m, corpus.test, dir.string());
  for (Real v : viz.pca.coords.values()) CHECK(v == 0.0);
  std::set<std::pair<SubwordId, std::size_t>> seen;
  for (const auto& u : corpus.test)
    for (SubwordId id : u.frame_ids())
      if (id != 0) seen.insert({id, u.accent_id});
  CHECK(viz.keys.size() == seen.size());
  std::ifstream in(dir / "shift_pca.csv");
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == seen.size() + 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("full-model gradient check") {
  const GradCheckReport r = run_gradcheck(tiny_experiment());
  CHECK(r.passed);
  CHECK(r.max_rel_error <= 1e-5);
  REQUIRE(r.modules.size() == 3);
  CHECK(r.modules[0].module == "encoder");
  CHECK(r.modules[1].module == "lasas");
  CHECK(r.modules[2].module == "head");
  const GradCheckReport again = run_gradcheck(tiny_experiment());
  CHECK(again.max_rel_error == r.max_rel_error);
}
