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

#include "lasas/harness/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include "lasas/errors.hpp"

namespace lasas::harness {

namespace {

constexpr std::uint64_t kPcaStartSeed = 0x5ca1ab1e;

Real norm(const std::vector<Real>& v) {
  Real s = 0.0;
  for (Real x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

PcaResult pca_project(const Matrix& x, std::size_t dims, const PcaOptions& opts) {
  const std::size_t m = x.rows(), n = x.cols();
  if (m < 2) throw DimensionError("pca_project: need at least two rows, got " + x.shape_str());
  if (dims == 0) throw ConfigError("pca_project: dims must be positive");

  Matrix centred = x;
  for (std::size_t j = 0; j < n; ++j) {
    Real mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) mean += x(i, j);
    mean /= static_cast<Real>(m);
    for (std::size_t i = 0; i < m; ++i) centred(i, j) -= mean;
  }
  Matrix cov = numerics::matmul_tn(centred, centred);
  for (Real& v : cov.values()) v /= static_cast<Real>(m);

  Real scale = 0.0;
  for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, cov(j, j));

  PcaResult out;
  out.components = Matrix(dims, n);
  numerics::Rng rng(kPcaStartSeed);
  for (std::size_t d = 0; d < dims; ++d) {
    std::vector<Real> v(n);
    for (Real& e : v) e = numerics::gaussian(rng, 1.0);
    Real len = norm(v);
    for (Real& e : v) e /= len;
    Real lambda = 0.0;
    bool zero = d >= n || scale <= 0.0;
    for (std::size_t it = 0; !zero && it < opts.max_iterations; ++it) {
      std::vector<Real> w(n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) w[i] += cov(i, j) * v[j];
      len = norm(w);
      if (len <= 1e-14 * scale) {
        zero = true;
        break;
      }
      for (Real& e : w) e /= len;
      Real delta = 0.0;
      for (std::size_t i = 0; i < n; ++i) delta = std::max(delta, std::abs(w[i] - v[i]));
      v = std::move(w);
      if (delta < opts.tolerance) break;
    }
    if (zero) {
      out.eigenvalues.push_back(0.0);
      continue;
    }
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(v[i]) > 1e-12) {
        if (v[i] < 0.0)
          for (Real& e : v) e = -e;
        break;
      }
    lambda = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) lambda += v[i] * cov(i, j) * v[j];
    out.eigenvalues.push_back(std::max(lambda, 0.0));
    for (std::size_t j = 0; j < n; ++j) out.components(d, j) = v[j];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) cov(i, j) -= lambda * v[i] * v[j];
  }
  out.coords = numerics::matmul_nt(centred, out.components);
  return out;
}

accent_shift::MeanShiftTable mean_shift_table(AccentModel& model, const synthgen::Dataset& data) {
  std::vector<accent_shift::ShiftObservation> obs;
  obs.reserve(data.size());
  for (const auto& u : data) {
    auto ids = u.frame_ids();
    Matrix s = model.shift(u.frames, ids);
    obs.push_back({std::move(ids), u.accent_id, std::move(s)});
  }
  return accent_shift::export_mean_shift(obs);
}

ShiftViz export_shift_viz(AccentModel& model, const synthgen::Dataset& data, const std::string& out_dir) {
  ShiftViz viz;
  viz.table = mean_shift_table(model, data);
  Matrix rows(viz.table.centroids.size(), viz.table.num_spaces);
  std::size_t r = 0;
  for (const auto& [key, c] : viz.table.centroids) {
    viz.keys.push_back(key);
    for (std::size_t j = 0; j < c.size(); ++j) rows(r, j) = c[j];
    ++r;
  }
  viz.pca = pca_project(rows, 2);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    accent_shift::write_mean_shift_csv((std::filesystem::path(out_dir) / "mean_shift.csv").string(), viz.table);
    const auto path = std::filesystem::path(out_dir) / "shift_pca.csv";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "subword,accent,x,y\n";
    char buf[80];
    for (std::size_t i = 0; i < viz.keys.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%u,%zu,%.17g,%.17g\n", viz.keys[i].first, viz.keys[i].second,
                    viz.pca.coords(i, 0), viz.pca.coords(i, 1));
      out << buf;
    }
    if (!out) throw IoError("write failed: " + path.string());
  }
  return viz;
}

std::vector<SubwordSpread> centroid_spreads(const accent_shift::MeanShiftTable& table,
                                            const std::set<SubwordId>& shifted) {
  std::map<SubwordId, std::vector<const std::vector<Real>*>> by_subword;
  for (const auto& [key, c] : table.centroids) by_subword[key.first].push_back(&c);
  std::vector<SubwordSpread> out;
  for (const auto& [sub, cs] : by_subword) {
    if (sub == tokenizer::kSilenceId || cs.size() < 2) continue;
    Real total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < cs.size(); ++a)
      for (std::size_t b = a + 1; b < cs.size(); ++b) {
        Real d2 = 0.0;
        for (std::size_t j = 0; j < cs[a]->size(); ++j) d2 += ((*cs[a])[j] - (*cs[b])[j]) * ((*cs[a])[j] - (*cs[b])[j]);
        total += std::sqrt(d2);
        ++pairs;
      }
    out.push_back({sub, shifted.count(sub) > 0, cs.size(), total / static_cast<Real>(pairs)});
  }
  return out;
}

GeometrySummary shift_geometry(const std::vector<SubwordSpread>& spreads, Real ratio) {
  GeometrySummary g;
  std::size_t unshifted = 0;
  for (const auto& s : spreads)
    if (!s.shifted) {
      g.unshifted_mean_spread += s.spread;
      ++unshifted;
    }
  if (unshifted == 0) throw DimensionError("shift_geometry: no unshifted subword observed in two accents");
  g.unshifted_mean_spread /= static_cast<Real>(unshifted);
  for (const auto& s : spreads) {
    if (!s.shifted) continue;
    ++g.shifted_total;
    if (s.spread >= ratio * g.unshifted_mean_spread) ++g.shifted_passing;
  }
  g.passing_fraction = g.shifted_total == 0 ? 0.0 : static_cast<Real>(g.shifted_passing) / static_cast<Real>(g.shifted_total);
  return g;
}

}  // namespace lasas::harness
