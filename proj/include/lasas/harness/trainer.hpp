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

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lasas/harness/model.hpp"

namespace lasas::harness {

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  Real train_loss = 0.0;  // mean over training utterances
  Real dev_accuracy = 0.0;
};

struct RunReport {
  ExperimentConfig config;
  std::size_t num_accents = 0;
  std::size_t vocab_size = 0;
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;  // 0 = the untrained initialization
  Real dev_accuracy = 0.0;
  Real test_accuracy = 0.0;
  std::string checkpoint;
  /// Seconds; kept out of to_json so reports stay byte-identical across runs.
  double wall_time = 0.0;

  nlohmann::json to_json() const;
};

/// Engine streams for transcript corruption, one per split.
inline constexpr std::uint64_t kTrainTextStream = 202;
inline constexpr std::uint64_t kDevTextStream = 203;
inline constexpr std::uint64_t kTestTextStream = 204;

/// Text ids fed to the model for every utterance of a split, corrupted with
/// rate p using a per-utterance derived engine. p = 0 returns the clean ids.
std::vector<std::vector<SubwordId>> transcripts(const synthgen::Dataset& data, Real p, std::size_t vocab_size,
                                                std::uint64_t seed, std::uint64_t stream);

Real evaluate(AccentModel& model, const synthgen::Dataset& data, const std::vector<std::vector<SubwordId>>& text);

/// Trains on corpus.train, selects the best dev epoch, reports dev and test
/// accuracy of that checkpoint. Aborts with NumericError (naming the step) if
/// the loss turns non-finite. When cfg.output_dir is set, writes report.json,
/// timing.json and checkpoint.json there.
RunReport train(const ExperimentConfig& cfg, const synthgen::Corpus& corpus);
/// Loads the corpus named by cfg.data first.
RunReport train(const ExperimentConfig& cfg);

/// The trained model of the last `train` call is not kept; this variant
/// hands it back for analysis.
RunReport train(const ExperimentConfig& cfg, const synthgen::Corpus& corpus, std::unique_ptr<AccentModel>* model_out);

void write_report(const std::string& dir, const RunReport& report);

}  // namespace lasas::harness
