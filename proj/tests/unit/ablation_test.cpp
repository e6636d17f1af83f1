/*
 * Copyright 2026 The Artic Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include "artic/ablation/ablation.hpp"
#include "artic/ablation/importance_map.hpp"
#include "artic/errors.hpp"
#include "test_util.hpp"

namespace artic::ablation {
namespace {

std::vector<FeatureColumn> toy_map(int n_features) {
  std::vector<FeatureColumn> map;
  for (int f = 0; f < n_features; ++f) map.push_back({f / 2, f % 2});
  return map;
}

ReferenceFrame toy_frame(int n_points) {
  ReferenceFrame frame;
  frame.positions.resize(n_points, 2);
  for (int p = 0; p < n_points; ++p) {
    frame.point_indices.push_back(p);
    frame.positions(p, 0) = 10.0 + (p % 12) * 5.0;
    frame.positions(p, 1) = 10.0 + (p / 12) * 6.0;
  }
  return frame;
}

TEST(Plan, SizesAndDeterminism) {
  EXPECT_EQ(keep_count(230, 0.9), 207);
  const SubsetPlan a = make_plan(3, 12);
  const SubsetPlan b = make_plan(3, 12);
  ASSERT_EQ(a.subsets.size(), 12u);
  EXPECT_EQ(a.subset_size(), 207);
  EXPECT_EQ(a.subsets, b.subsets);
  EXPECT_NE(make_plan(4, 12).subsets, a.subsets);
  for (const auto& s : a.subsets) {
    EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
    EXPECT_EQ(std::set<int>(s.begin(), s.end()).size(), 207u);
    EXPECT_GE(s.front(), 0);
    EXPECT_LT(s.back(), 230);
  }
  EXPECT_EQ(make_plan(3, 0).subsets.size(), 0u);
  EXPECT_THROW(make_plan(3, 5, 0.0), ConfigError);
  EXPECT_THROW(make_plan(3, 5, 1.5), ConfigError);
}

TEST(Plan, JsonAndFileRoundTrip) {
  testing::TempDir dir("plan");
  const SubsetPlan plan = make_plan(21, 4, 0.5, 10);
  EXPECT_EQ(SubsetPlan::from_json(plan.to_json()).subsets, plan.subsets);
  save_plan(plan, dir / "plan.json");
  const SubsetPlan back = load_plan(dir / "plan.json");
  EXPECT_EQ(back.subsets, plan.subsets);
  EXPECT_EQ(back.seed, 21u);
  EXPECT_EQ(back.n_features, 10);
  EXPECT_THROW(load_plan(dir / "missing.json"), LoadError);
  std::ofstream(dir / "bad.json") << R"({"seed":1,"n_features":4,"keep_fraction":0.5,"subsets":[[0,9]]})";
  EXPECT_THROW(load_plan(dir / "bad.json"), FormatError);
}

TEST(Aggregate, MatchesHandComputedOracle) {
  SubsetPlan plan;
  plan.n_features = 4;
  plan.keep_fraction = 0.5;
  plan.subsets = {{0, 1}, {1, 2}, {0, 3}};
  const FeatureImportanceReport r = aggregate_importance(plan, {1.0, 3.0, 5.0}, {false, false, false});
  EXPECT_DOUBLE_EQ(r.scores[0], 3.0);
  EXPECT_DOUBLE_EQ(r.scores[1], 2.0);
  EXPECT_DOUBLE_EQ(r.scores[2], 3.0);
  EXPECT_DOUBLE_EQ(r.scores[3], 5.0);
  EXPECT_EQ(r.ranks, (std::vector<int>{2, 1, 3, 4}));
  EXPECT_EQ(r.inclusion_counts, (std::vector<int>{2, 2, 1, 1}));
  EXPECT_THROW(aggregate_importance(plan, {1.0}, {false}), ShapeError);
}

TEST(Aggregate, RanksInvariantUnderMonotoneTransform) {
  const SubsetPlan plan = make_plan(8, 30);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(1.0, 9.0);
  std::vector<double> mcd(30), transformed(30);
  for (int s = 0; s < 30; ++s) {
    mcd[s] = u(rng);
    transformed[s] = 3.0 * mcd[s] + 2.0;
  }
  const std::vector<bool> ok(30, false);
  EXPECT_EQ(aggregate_importance(plan, mcd, ok).ranks, aggregate_importance(plan, transformed, ok).ranks);
}

TEST(Aggregate, ConstantModelRanksByIndex) {
  const SubsetPlan plan = make_plan(5, 20);
  const FeatureImportanceReport r = run_ablation(plan, [](const std::vector<int>&) { return 4.2; });
  for (int f = 0; f < 230; ++f) {
    if (r.inclusion_counts[f] > 0) EXPECT_DOUBLE_EQ(r.scores[f], 4.2);
  }
  std::vector<int> sorted = r.ranks;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 230; ++i) EXPECT_EQ(sorted[i], i + 1);
}

TEST(Aggregate, NeverKeptFeatureRanksLast) {
  SubsetPlan plan;
  plan.n_features = 3;
  plan.subsets = {{0, 1}, {0, 1}};
  const FeatureImportanceReport r = aggregate_importance(plan, {2.0, 1.0}, {false, false});
  EXPECT_TRUE(std::isinf(r.scores[2]));
  EXPECT_EQ(r.ranks[2], 3);
  EXPECT_EQ(r.ranks[0], 1);
  EXPECT_EQ(r.ranks[1], 2);
}

TEST(RunAblation, FailedSubsetsExcludedAndRecorded) {
  SubsetPlan plan;
  plan.n_features = 3;
  plan.subsets = {{0, 1}, {1, 2}, {0, 2}};
  const FeatureImportanceReport r = run_ablation(plan, [](const std::vector<int>& keep) {
    if (keep == std::vector<int>{1, 2}) throw TransportError("synthesis crashed");
    if (keep == std::vector<int>{0, 2}) return std::nan("");
    return 2.0;
  });
  EXPECT_TRUE(r.has_failures());
  EXPECT_EQ(r.failed, (std::vector<bool>{false, true, true}));
  EXPECT_EQ(r.failures[1], "synthesis crashed");
  EXPECT_FALSE(r.failures[2].empty());
  EXPECT_TRUE(std::isnan(r.subset_mcd[1]));
  EXPECT_EQ(r.inclusion_counts, (std::vector<int>{1, 1, 0}));
  EXPECT_TRUE(std::isinf(r.scores[2]));
  const auto j = r.to_json();
  EXPECT_EQ(j.at("num_failed"), 2);
}

TEST(RunAblation, PlantedFeatureRanksFirst) {
  const SubsetPlan plan = make_plan(17, 40);
  const FeatureImportanceReport r = run_ablation(plan, [](const std::vector<int>& keep) {
    return std::binary_search(keep.begin(), keep.end(), 42) ? 5.0 : 6.0;
  });
  EXPECT_EQ(r.ranks[42], 1);
}

TEST(ImportanceMap, CsvLayout) {
  testing::TempDir dir("map");
  const SubsetPlan plan = make_plan(2, 10);
  const FeatureImportanceReport r = run_ablation(plan, [](const std::vector<int>& keep) { return keep.front() * 1.0; });
  write_importance_csv(r, toy_map(230), dir / "imp.csv");
  std::ifstream in(dir / "imp.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "point,axis,score,rank");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 230);
  EXPECT_THROW(write_importance_csv(r, toy_map(10), dir / "x.csv"), ShapeError);
}

TEST(ImportanceMap, ConstantScoresGiveOneShade) {
  const SubsetPlan plan = make_plan(2, 10);
  FeatureImportanceReport r = run_ablation(plan, [](const std::vector<int>&) { return 1.0; });
  std::fill(r.scores.begin(), r.scores.end(), 1.0);
  const std::vector<double> shades = point_shades(r, toy_map(230), toy_frame(115));
  ASSERT_EQ(shades.size(), 115u);
  for (double s : shades) EXPECT_DOUBLE_EQ(s, shades.front());
}

TEST(ImportanceMap, MostImportantPointIsDarkestAndPngWritten) {
  testing::TempDir dir("map");
  const SubsetPlan plan = make_plan(17, 40);
  const FeatureImportanceReport r = run_ablation(plan, [](const std::vector<int>& keep) {
    return std::binary_search(keep.begin(), keep.end(), 42) ? 5.0 : 6.0;
  });
  const std::vector<double> shades = point_shades(r, toy_map(230), toy_frame(115));
  const auto darkest = std::min_element(shades.begin(), shades.end()) - shades.begin();
  EXPECT_EQ(darkest, 21);
  EXPECT_DOUBLE_EQ(shades[21], 0.0);

  render_importance_map(r, toy_map(230), toy_frame(115), dir / "map.png");
  std::ifstream png(dir / "map.png", std::ios::binary);
  char sig[8];
  png.read(sig, 8);
  EXPECT_EQ(std::string(sig, 8), std::string("\x89PNG\r\n\x1a\n", 8));
}

TEST(ReferenceFrame, JsonRoundTrip) {
  const ReferenceFrame f = toy_frame(5);
  const ReferenceFrame g = ReferenceFrame::from_json(f.to_json());
  EXPECT_EQ(g.point_indices, f.point_indices);
  EXPECT_EQ(g.positions, f.positions);
  EXPECT_THROW(ReferenceFrame::from_json(nlohmann::json::object()), FormatError);
}

class EchoSynth : public models::Synthesizer {
 public:
  explicit EchoSynth(int dim) : dim_(dim) {}
  std::string name() const override { return "echo"; }
  int input_dim() const override { return dim_; }
  std::size_t parameter_count() override { return 0; }
  Eigen::VectorXf synthesize(const MatrixX<float>& features) override {
    Eigen::VectorXf out(features.rows() * kSamplesPerFrame);
    for (Index i = 0; i < out.size(); ++i) {
      const float level = features.row(i / kSamplesPerFrame).mean();
      out[i] = 0.3f * std::sin(0.05f * static_cast<float>(i) * (1.0f + std::abs(level)));
    }
    return out;
  }

 private:
  int dim_;
};

Waveform reference_wave(Index frames) {
  Waveform w;
  w.samples.resize(frames * kSamplesPerFrame);
  for (Index i = 0; i < w.samples.size(); ++i) w.samples[i] = 0.3f * std::sin(0.07f * static_cast<float>(i));
  return w;
}

TEST(CompareEma, SelfComparisonTies) {
  EchoSynth mri(230), ema(12);
  std::vector<ComparisonUtterance> set;
  for (int u = 0; u < 2; ++u) {
    set.push_back({"u" + std::to_string(u), MatrixX<float>::Zero(20, 230), MatrixX<float>::Zero(20, 12),
                   reference_wave(20), "the vocal tract"});
  }
  eval::StubAsrClient asr({}, "the vocal tract");
  const EmaComparison c = compare_ema(mri, ema, set, "split-a", "split-a", &asr);
  EXPECT_EQ(c.mcd_winner, "tie");
  EXPECT_EQ(c.cer_winner, "tie");
  EXPECT_EQ(compare_ema(mri, ema, set, "s", "s", nullptr).cer_winner, "n/a");
  EXPECT_THROW(compare_ema(mri, ema, set, "split-a", "split-b", &asr), ConfigError);
  EXPECT_TRUE(c.to_json().contains("winner"));
}

TEST(MaskedMcd, MaskChangesOnlyWhenSynthesisDepends) {
  EchoSynth model(230);
  std::vector<TestUtterance> set{{"u0", MatrixX<float>::Constant(20, 230, 0.5f), reference_wave(20), "x"}};
  std::vector<int> all(230);
  for (int f = 0; f < 230; ++f) all[f] = f;
  const double full = masked_mean_mcd(model, set, all);
  const double none = masked_mean_mcd(model, set, {});
  EXPECT_TRUE(std::isfinite(full));
  EXPECT_NE(full, none);
  EXPECT_THROW(masked_mean_mcd(model, {}, all), ConfigError);
}

}  // namespace
}  // namespace artic::ablation
