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

#include "lasas/harness/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include <nlohmann/json.hpp>

#include "lasas/errors.hpp"
#include "lasas/numerics/adam.hpp"

namespace lasas::harness {

namespace {

constexpr std::uint64_t kShuffleStream = 201;

// Every utterance builds and frees a tape of a few hundred matrices. glibc's
// default trimming hands that memory back to the kernel after each tape and
// faults it in again on the next, which costs about a quarter of wall time.
void keep_heap() {
#if defined(__GLIBC__)
  static const bool once = [] {
    mallopt(M_TRIM_THRESHOLD, 256 << 20);
    mallopt(M_TOP_PAD, 64 << 20);
    return true;
  }();
  (void)once;
#endif
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

nlohmann::json RunReport::to_json() const {
  nlohmann::json ep = nlohmann::json::array();
  for (const auto& e : epochs) {
    ep.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"dev_accuracy", e.dev_accuracy}});
  }
  return {{"config", config.to_json()},       {"seed", config.seed},
          {"num_accents", num_accents},       {"vocab_size", vocab_size},
          {"epochs", ep},                     {"best_epoch", best_epoch},
          {"dev_accuracy", dev_accuracy},     {"test_accuracy", test_accuracy},
          {"checkpoint", checkpoint}};
}

std::vector<std::vector<SubwordId>> transcripts(const synthgen::Dataset& data, Real p, std::size_t vocab_size,
                                                std::uint64_t seed, std::uint64_t stream) {
  std::vector<std::vector<SubwordId>> out;
  out.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (p <= 0.0) {
      out.push_back(data[i].frame_ids());
      continue;
    }
    numerics::Rng rng(numerics::derive_seed({seed, stream, i}));
    out.push_back(tokenizer::expand_alignment(synthgen::corrupt_text(data[i].segments, p, vocab_size, rng)));
  }
  return out;
}

Real evaluate(AccentModel& model, const synthgen::Dataset& data, const std::vector<std::vector<SubwordId>>& text) {
  if (text.size() != data.size()) throw DimensionError("evaluate: transcript count mismatch");
  std::vector<std::size_t> pred, gold;
  for (std::size_t i = 0; i < data.size(); ++i) {
    Tape tape;
    pred.push_back(arhead::predict(tape.value(model.forward(tape, data[i].frames, text[i]))));
    gold.push_back(data[i].accent_id);
  }
  return arhead::accuracy(pred, gold);
}

RunReport train(const ExperimentConfig& cfg, const synthgen::Corpus& corpus, std::unique_ptr<AccentModel>* model_out) {
  const auto start = std::chrono::steady_clock::now();
  keep_heap();
  cfg.validate();
  if (corpus.train.empty() || corpus.dev.empty()) throw ConfigError("train: corpus has an empty train or dev split");
  const std::size_t vocab = corpus.world.vocab_size();
  const std::size_t k = corpus.world.config.num_accents;
  auto model = std::make_unique<AccentModel>(cfg, corpus.world.config.feature_dim, vocab, k);

  RunReport report;
  report.config = cfg;
  report.num_accents = k;
  report.vocab_size = vocab;

  const auto train_text = transcripts(corpus.train, cfg.corruption.train, vocab, cfg.seed, kTrainTextStream);
  const auto dev_text = transcripts(corpus.dev, cfg.corruption.eval, vocab, cfg.seed, kDevTextStream);
  const auto test_text = transcripts(corpus.test, cfg.corruption.eval, vocab, cfg.seed, kTestTextStream);

  const ParamList& params = model->params();
  numerics::Adam adam(params, {cfg.optimizer.lr, 0.9, 0.999, 1e-8});
  std::vector<Matrix> best;
  for (auto* p : params) best.push_back(p->value);
  report.dev_accuracy = evaluate(*model, corpus.dev, dev_text);

  std::vector<std::size_t> order(corpus.train.size());
  const std::size_t batch = cfg.optimizer.batch_size;
  std::size_t step = 0;
  for (std::size_t epoch = 1; epoch <= cfg.optimizer.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    numerics::Rng rng(numerics::derive_seed({cfg.seed, kShuffleStream, epoch}));
    std::shuffle(order.begin(), order.end(), rng);
    Real loss_sum = 0.0;
    for (std::size_t b = 0; b < order.size(); b += batch) {
      const std::size_t end = std::min(order.size(), b + batch);
      numerics::zero_grads(params);
      Real batch_loss = 0.0;
      for (std::size_t j = b; j < end; ++j) {
        const auto& u = corpus.train[order[j]];
        Tape tape;
        const Var loss = tape.cross_entropy(model->forward(tape, u.frames, train_text[order[j]]), u.accent_id);
        batch_loss += tape.scalar(loss);
        tape.backward(loss, 1.0 / static_cast<Real>(end - b));
      }
      ++step;
      if (!std::isfinite(batch_loss)) {
        throw NumericError("training diverged: non-finite loss at step " + std::to_string(step) + " (epoch " +
                           std::to_string(epoch) + ")");
      }
      adam.step();
      loss_sum += batch_loss;
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<Real>(order.size());
    rec.dev_accuracy = evaluate(*model, corpus.dev, dev_text);
    report.epochs.push_back(rec);
    if (rec.dev_accuracy > report.dev_accuracy) {
      report.dev_accuracy = rec.dev_accuracy;
      report.best_epoch = epoch;
      for (std::size_t i = 0; i < params.size(); ++i) best[i] = params[i]->value;
    }
  }
  for (std::size_t i = 0; i < params.size(); ++i) params[i]->value = best[i];
  report.test_accuracy = corpus.test.empty() ? 0.0 : evaluate(*model, corpus.test, test_text);

  if (!cfg.output_dir.empty()) {
    std::filesystem::create_directories(cfg.output_dir);
    const auto ckpt = std::filesystem::path(cfg.output_dir) / "checkpoint.json";
    write_checkpoint(ckpt.string(), params);
    report.checkpoint = ckpt.string();
  }
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!cfg.output_dir.empty()) write_report(cfg.output_dir, report);
  if (model_out != nullptr) *model_out = std::move(model);
  return report;
}

RunReport train(const ExperimentConfig& cfg, const synthgen::Corpus& corpus) { return train(cfg, corpus, nullptr); }

RunReport train(const ExperimentConfig& cfg) {
  cfg.validate(true);
  return train(cfg, synthgen::load_corpus(cfg.data));
}

void write_report(const std::string& dir, const RunReport& report) {
  std::filesystem::create_directories(dir);
  write_text(std::filesystem::path(dir) / "report.json", report.to_json().dump(2) + "\n");
  write_text(std::filesystem::path(dir) / "timing.json",
             nlohmann::json{{"wall_time_seconds", report.wall_time}}.dump(2) + "\n");
}

}  // namespace lasas::harness
