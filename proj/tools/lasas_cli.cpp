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

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <nlohmann/json.hpp>

#include "lasas/errors.hpp"
#include "lasas/harness/ablation.hpp"
#include "lasas/harness/analysis.hpp"
#include "lasas/harness/gradcheck_runner.hpp"
#include "lasas/harness/trainer.hpp"

namespace {

using namespace lasas;
using harness::ExperimentConfig;

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << doc.dump(2) << "\n";
}

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

ExperimentConfig experiment(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : ExperimentConfig::load(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (!c.out.empty()) cfg.output_dir = c.out;
  return cfg;
}

const synthgen::Dataset& split(const synthgen::Corpus& corpus, const std::string& name) {
  if (name == "train") return corpus.train;
  if (name == "dev") return corpus.dev;
  if (name == "test") return corpus.test;
  throw ConfigError("unknown split '" + name + "'");
}

std::unique_ptr<harness::AccentModel> load_model(const ExperimentConfig& cfg, const synthgen::Corpus& corpus,
                                                 const std::string& checkpoint) {
  auto model = std::make_unique<harness::AccentModel>(cfg, corpus.world.config.feature_dim, corpus.world.vocab_size(),
                                                      corpus.world.config.num_accents);
  harness::read_checkpoint(checkpoint, model->params());
  return model;
}

void add_common(CLI::App* app, Common& c, bool out_required) {
  app->add_option("--config", c.config, "JSON config file");
  app->add_option("--seed", c.seed, "Override the seed");
  auto* o = app->add_option("--out", c.out, "Output directory");
  if (out_required) o->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Accent recognition with linguistic-acoustic similarity"};
  app.require_subcommand(1);

  Common gen, tr, ev, ab, ex, gc;
  auto* gen_cmd = app.add_subcommand("gen-data", "Generate the synthetic accent corpus");
  add_common(gen_cmd, gen, true);

  auto* train_cmd = app.add_subcommand("train", "Train one system and write report.json");
  add_common(train_cmd, tr, false);

  std::string checkpoint, which = "test";
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on a split");
  add_common(eval_cmd, ev, false);
  eval_cmd->add_option("--checkpoint", checkpoint, "checkpoint.json written by train")->required();
  eval_cmd->add_option("--split", which, "train, dev or test");

  std::string axis;
  std::size_t seeds = 3;
  auto* ablate_cmd = app.add_subcommand("ablate", "Run an ablation axis over several seeds");
  add_common(ablate_cmd, ab, false);
  ablate_cmd->add_option("--axis", axis, "spaces, variant, taps or corruption")->required();
  ablate_cmd->add_option("--seeds", seeds, "Seeds per setting");

  std::string ex_checkpoint, ex_split = "test";
  auto* export_cmd = app.add_subcommand("export-shift", "Write mean accent-shift centroids and their 2-D PCA");
  add_common(export_cmd, ex, true);
  export_cmd->add_option("--checkpoint", ex_checkpoint, "checkpoint.json of a lasas run")->required();
  export_cmd->add_option("--split", ex_split, "train, dev or test");

  auto* grad_cmd = app.add_subcommand("gradcheck", "Finite-difference check of encoder, LASAS block and head");
  add_common(grad_cmd, gc, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_cmd) {
      synthgen::CorpusConfig cc = gen.config.empty() ? synthgen::CorpusConfig{}
                                                     : synthgen::CorpusConfig::from_json(read_json(gen.config));
      if (gen.seed) cc.seed = *gen.seed;
      const auto corpus = synthgen::generate_corpus(cc, gen.out);
      std::printf("wrote %s: %zu train, %zu dev, %zu test utterances, %zu subwords\n", gen.out.c_str(),
                  corpus.train.size(), corpus.dev.size(), corpus.test.size(), corpus.world.vocab_size());
    } else if (*train_cmd) {
      const ExperimentConfig cfg = experiment(tr);
      const auto report = harness::train(cfg);
      if (cfg.output_dir.empty()) std::cout << report.to_json().dump(2) << "\n";
      std::printf("%s seed %llu: dev %.4f test %.4f (best epoch %zu, %.1fs)\n", arhead::to_string(cfg.variant).c_str(),
                  static_cast<unsigned long long>(cfg.seed), report.dev_accuracy, report.test_accuracy,
                  report.best_epoch, report.wall_time);
    } else if (*eval_cmd) {
      const ExperimentConfig cfg = experiment(ev);
      cfg.validate(true);
      const auto corpus = synthgen::load_corpus(cfg.data);
      auto model = load_model(cfg, corpus, checkpoint);
      const auto& data = split(corpus, which);
      const auto text = harness::transcripts(data, cfg.corruption.eval, corpus.world.vocab_size(), cfg.seed,
                                             which == "dev" ? harness::kDevTextStream : harness::kTestTextStream);
      std::printf("%s accuracy %.4f over %zu utterances\n", which.c_str(), harness::evaluate(*model, data, text),
                  data.size());
    } else if (*ablate_cmd) {
      ExperimentConfig cfg = experiment(ab);
      cfg.validate(true);
      const auto corpus = synthgen::load_corpus(cfg.data);
      const auto a = harness::axis_from_string(axis);
      const auto table = harness::ablate(
          cfg, a, [&](const ExperimentConfig& c) { return harness::train(c, corpus); }, seeds);
      std::cout << table.to_markdown();
      if (!cfg.output_dir.empty()) {
        write_json(std::filesystem::path(cfg.output_dir) / ("ablation_" + harness::to_string(a) + ".json"),
                   table.to_json());
      }
    } else if (*export_cmd) {
      ExperimentConfig cfg = experiment(ex);
      cfg.validate(true);
      if (cfg.variant != arhead::SystemVariant::kLasas) throw ConfigError("export-shift needs a lasas config");
      const auto corpus = synthgen::load_corpus(cfg.data);
      auto model = load_model(cfg, corpus, ex_checkpoint);
      const auto viz = harness::export_shift_viz(*model, split(corpus, ex_split), ex.out);
      std::printf("wrote %zu (subword, accent) rows to %s\n", viz.keys.size(), ex.out.c_str());
    } else if (*grad_cmd) {
      const ExperimentConfig cfg = experiment(gc);
      const auto r = harness::run_gradcheck(cfg);
      for (const auto& m : r.modules) {
        std::printf("%-8s max rel error %.3e (%s)\n", m.module.c_str(), m.max_rel_error, m.worst_param.c_str());
      }
      if (!gc.out.empty()) write_json(std::filesystem::path(gc.out) / "gradcheck.json", r.to_json());
      if (!r.passed) {
        std::fprintf(stderr, "gradcheck failed: %s has relative error %.3e > %.0e\n", r.worst_param.c_str(),
                     r.max_rel_error, r.threshold);
        return 1;
      }
      std::printf("gradcheck passed (threshold %.0e)\n", r.threshold);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
