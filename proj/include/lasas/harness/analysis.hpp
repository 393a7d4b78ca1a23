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
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lasas/accent_shift/lasas_block.hpp"
#include "lasas/harness/model.hpp"

namespace lasas::harness {

struct PcaResult {
  Matrix coords;                 // M × dims
  std::vector<Real> eigenvalues;  // descending, population covariance
  Matrix components;             // dims × N, unit rows (zero rows past the rank)
};

struct PcaOptions {
  Real tolerance = 1e-9;
  std::size_t max_iterations = 10000;
};

/// Mean-centres the rows of `x` and projects them on the top `dims`
/// eigenvectors of the covariance, found by power iteration with deflation.
/// Each eigenvector's first nonzero component is made positive. A rank-0
/// input gives zero coordinates. Needs at least two rows.
PcaResult pca_project(const Matrix& x, std::size_t dims = 2, const PcaOptions& opts = {});

/// Accent shift of every utterance of `data`, averaged per (subword, accent).
accent_shift::MeanShiftTable mean_shift_table(AccentModel& model, const synthgen::Dataset& data);

struct ShiftViz {
  accent_shift::MeanShiftTable table;
  std::vector<std::pair<SubwordId, std::size_t>> keys;  // row order of `pca.coords`
  PcaResult pca;
};

/// Mean shift table plus its 2-D PCA. When `out_dir` is non-empty, writes
/// mean_shift.csv (subword,accent,s1..sN) and shift_pca.csv (subword,accent,x,y).
ShiftViz export_shift_viz(AccentModel& model, const synthgen::Dataset& data, const std::string& out_dir);

struct SubwordSpread {
  SubwordId subword = 0;
  bool shifted = false;
  std::size_t accents = 0;  // accents in which the subword was observed
  Real spread = 0.0;        // mean pairwise distance between accent centroids
};

/// One entry per non-silence subword seen in at least two accents.
std::vector<SubwordSpread> centroid_spreads(const accent_shift::MeanShiftTable& table,
                                            const std::set<SubwordId>& shifted);

struct GeometrySummary {
  Real unshifted_mean_spread = 0.0;
  std::size_t shifted_total = 0;
  std::size_t shifted_passing = 0;  // spread >= ratio × unshifted mean
  Real passing_fraction = 0.0;
};

GeometrySummary shift_geometry(const std::vector<SubwordSpread>& spreads, Real ratio = 2.0);

}  // namespace lasas::harness
