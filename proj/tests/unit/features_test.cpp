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
#include <set>

#include "artic/errors.hpp"
#include "artic/features.hpp"
#include "test_util.hpp"

namespace artic {
namespace {

TEST(Prune, DefaultKeepsOneHundredFifteen) {
  std::mt19937_64 rng(1);
  const auto c = testing::random_contours("a", 4, rng);
  const auto p = prune(c, default_feature_config().keep_labels);
  EXPECT_EQ(p.num_points(), 115);
  EXPECT_EQ(p.num_frames(), 4);
  EXPECT_EQ(p.point_indices.size(), 115u);
  EXPECT_TRUE(std::is_sorted(p.point_indices.begin(), p.point_indices.end()));
  for (Index k = 0; k < 115; ++k) {
    EXPECT_EQ(p.point(2, k), c.point(2, p.point_indices[static_cast<std::size_t>(k)]));
  }
}

TEST(Prune, KeepingEverythingIsAnError) {
  std::mt19937_64 rng(1);
  const auto c = testing::random_contours("a", 1, rng);
  const auto& labels = default_segment_labels();
  const std::set<std::string> all(labels.begin(), labels.end());
  EXPECT_THROW(prune(c, all), ConfigError);
}

TEST(Prune, SingleFrame) {
  std::mt19937_64 rng(1);
  EXPECT_EQ(prune(testing::random_contours("a", 1, rng), default_feature_config().keep_labels).num_frames(), 1);
}

TEST(Prune, Idempotent) {
  std::mt19937_64 rng(2);
  const auto keep = default_feature_config().keep_labels;
  const auto once = prune(testing::random_contours("a", 3, rng), keep);
  const auto twice = prune(once, keep);
  EXPECT_EQ(once.frames, twice.frames);
  EXPECT_EQ(once.point_indices, twice.point_indices);
}

TEST(FitCenter, ConstantPointWins) {
  std::mt19937_64 rng(3);
  std::vector<ContourSequence> corpus;
  for (int u = 0; u < 3; ++u) {
    auto c = testing::random_contours("u", 10, rng);
    c.frames.col(14).setConstant(30.0f);
    c.frames.col(15).setConstant(31.0f);
    corpus.push_back(c);
  }
  const CenterSpec spec = fit_center(corpus);
  EXPECT_EQ(spec.point_index, 7);
  EXPECT_EQ(spec.point_std.rows(), 170);
  EXPECT_DOUBLE_EQ(spec.point_std(7, 0), 0.0);
}

TEST(FitCenter, TieBreaksToLowestIndexAndIgnoresOrder) {
  std::mt19937_64 rng(4);
  std::vector<ContourSequence> corpus;
  for (int u = 0; u < 4; ++u) {
    auto c = testing::random_contours("u", 6, rng);
    // Points 120 and 60 move identically, with the smallest spread.
    for (Index t = 0; t < 6; ++t) {
      const float v = 40.0f + 0.001f * static_cast<float>((t + u) % 3);
      for (int p : {120, 60}) c.frames.row(t).segment(2 * p, 2).setConstant(v);
    }
    corpus.push_back(c);
  }
  EXPECT_EQ(fit_center(corpus).point_index, 60);
  std::reverse(corpus.begin(), corpus.end());
  EXPECT_EQ(fit_center(corpus).point_index, 60);
}

TEST(FitCenter, NeedsTwoFrames) {
  std::mt19937_64 rng(5);
  EXPECT_THROW(fit_center({testing::random_contours("a", 1, rng)}), StatisticsError);
  EXPECT_THROW(fit_center({}), StatisticsError);
  EXPECT_NO_THROW(fit_center({testing::random_contours("a", 1, rng), testing::random_contours("b", 1, rng)}));
}

// Hand-computed toy: three points, center = point 1.
TEST(CenterAndFlatten, ManualArithmetic) {
  FrameMatrix frames(2, 6);
  frames << 1, 2, 10, 20, 4, 8,  //
      3, 5, 11, 22, 7, 1;
  ContourSequence c = make_contours("toy", frames, {"a", "b", "c"});
  CenterSpec spec;
  spec.point_index = 1;
  spec.point_std = MatrixX<double>::Zero(3, 2);
  const auto traj = center_and_flatten(c, center_track(c, spec), spec);
  FrameMatrix expected(2, 6);
  expected << -9, -18, 0, 0, -6, -12,  //
      -8, -17, 0, 0, -4, -21;
  EXPECT_EQ(traj.data, expected);
  ASSERT_EQ(traj.feature_index_map.size(), 6u);
  EXPECT_EQ(traj.feature_index_map[5], (FeatureColumn{2, 1}));
}

TEST(CenterAndFlatten, AlreadyCenteredIsIdentity) {
  std::mt19937_64 rng(6);
  FeatureConfig config = default_feature_config();
  auto c = testing::random_contours("a", 5, rng);
  config.center = fit_center({c});
  const int center = config.center->point_index;
  for (Index t = 0; t < 5; ++t) {
    const Eigen::Vector2f origin = c.point(t, center);
    for (Index p = 0; p < 170; ++p) {
      c.frames(t, 2 * p) -= origin.x();
      c.frames(t, 2 * p + 1) -= origin.y();
    }
  }
  const auto traj = make_trajectory(c, config);
  const auto pruned = prune(c, config.keep_labels);
  EXPECT_EQ(traj.data, pruned.frames);
}

TEST(CenterAndFlatten, TranslationInvariant) {
  std::mt19937_64 rng(7);
  FeatureConfig config = default_feature_config();
  std::vector<ContourSequence> corpus{testing::random_contours("a", 8, rng), testing::random_contours("b", 8, rng)};
  config.center = fit_center(corpus);
  std::uniform_real_distribution<float> offset(-5.0f, 5.0f);
  for (int trial = 0; trial < 10; ++trial) {
    auto shifted = corpus[trial % 2];
    const float cx = offset(rng), cy = offset(rng);
    for (Index p = 0; p < 170; ++p) {
      shifted.frames.col(2 * p).array() += cx;
      shifted.frames.col(2 * p + 1).array() += cy;
    }
    const auto a = make_trajectory(corpus[trial % 2], config);
    const auto b = make_trajectory(shifted, config);
    EXPECT_LE((a.data - b.data).cwiseAbs().maxCoeff(), 1e-6f * kGridSize);
  }
}

TEST(CenterAndFlatten, TracksCenterOutsideRetainedSet) {
  std::mt19937_64 rng(8);
  FeatureConfig config = default_feature_config();
  auto c = testing::random_contours("a", 4, rng);
  const auto& labels = default_segment_labels();
  // First point whose label is discarded.
  int dropped = 0;
  while (config.keep_labels.count(labels[static_cast<std::size_t>(dropped)])) ++dropped;
  c.frames.col(2 * dropped).setConstant(42.0f);
  c.frames.col(2 * dropped + 1).setConstant(42.0f);
  config.center = fit_center({c});
  ASSERT_EQ(config.center->point_index, dropped);
  const auto traj = make_trajectory(c, config);
  const auto pruned = prune(c, config.keep_labels);
  EXPECT_FLOAT_EQ(traj.data(1, 0), pruned.frames(1, 0) - 42.0f);
}

TEST(Ema, SelectsColumnsWithoutArithmetic) {
  std::mt19937_64 rng(9);
  FeatureConfig config = default_feature_config();
  const auto c = testing::random_contours("a", 6, rng);
  config.center = fit_center({c});
  const auto traj = make_trajectory(c, config);
  const auto ema = estimate_ema(traj, config.ema_point_map);
  ASSERT_EQ(ema.data.cols(), 12);
  ASSERT_EQ(ema.data.rows(), 6);
  for (std::size_t k = 0; k < kEmaOrder.size(); ++k) {
    const int point = config.ema_point_map.at(kEmaOrder[k]);
    for (int axis = 0; axis < 2; ++axis) {
      const auto it = std::find(traj.feature_index_map.begin(), traj.feature_index_map.end(),
                                FeatureColumn{point, axis});
      ASSERT_NE(it, traj.feature_index_map.end());
      const Index col = it - traj.feature_index_map.begin();
      EXPECT_EQ(ema.data.col(static_cast<Index>(2 * k + axis)), traj.data.col(col));
    }
  }
}

TEST(Ema, EmptyTrajectoryAndUnmappedLocation) {
  FeatureConfig config = default_feature_config();
  std::mt19937_64 rng(10);
  const auto c = testing::random_contours("a", 3, rng);
  config.center = fit_center({c});
  auto traj = make_trajectory(c, config);
  traj.data.resize(0, kFeatureDim);
  EXPECT_EQ(estimate_ema(traj, config.ema_point_map).data.rows(), 0);
  auto partial = config.ema_point_map;
  partial.erase(EmaLocation::kTongueTip);
  EXPECT_THROW(estimate_ema(traj, partial), ConfigError);
}

TEST(Ema, DefaultPointsAreRetained) {
  const FeatureConfig config = default_feature_config();
  const auto& labels = default_segment_labels();
  for (const auto& [loc, point] : config.ema_point_map) {
    EXPECT_TRUE(config.keep_labels.count(labels[static_cast<std::size_t>(point)])) << to_string(loc);
  }
}

TEST(Mask, IdentityEmptyAndComplement) {
  ArticulatoryTrajectory traj;
  traj.data = FrameMatrix::Random(7, kFeatureDim);
  std::vector<int> all(kFeatureDim);
  std::iota(all.begin(), all.end(), 0);
  EXPECT_EQ(mask_features(traj, all).data, traj.data);
  EXPECT_TRUE(mask_features(traj, {}).data.isZero(0.0f));

  std::vector<int> keep(all.begin(), all.begin() + 207);
  const auto masked = mask_features(traj, keep);
  int zero_cols = 0;
  for (Index c = 0; c < kFeatureDim; ++c) zero_cols += masked.data.col(c).isZero(0.0f) ? 1 : 0;
  EXPECT_EQ(zero_cols, 23);
  EXPECT_EQ(masked.data.leftCols(207), traj.data.leftCols(207));
}

TEST(Mask, IdempotentAndCommutes) {
  ArticulatoryTrajectory traj;
  traj.data = FrameMatrix::Random(4, kFeatureDim);
  std::vector<int> a, b;
  for (int i = 0; i < kFeatureDim; ++i) (i % 3 == 0 ? a : b).push_back(i);
  const auto once = mask_features(traj, a);
  EXPECT_EQ(mask_features(once, a).data, once.data);
  EXPECT_EQ(mask_features(mask_features(traj, a), b).data, mask_features(mask_features(traj, b), a).data);
}

TEST(Mask, OutOfRange) {
  ArticulatoryTrajectory traj;
  traj.data = FrameMatrix::Zero(2, kFeatureDim);
  EXPECT_THROW(mask_features(traj, {230}), Error);
  EXPECT_THROW(mask_features(traj, {-1}), Error);
}

TEST(FeatureConfigFile, ShippedDefaultsMatchCode) {
  const FeatureConfig shipped = load_feature_config(std::filesystem::path(ARTIC_SOURCE_DIR) / "config/features_default.json");
  const FeatureConfig code = default_feature_config();
  EXPECT_EQ(shipped.segment_labels, code.segment_labels);
  EXPECT_EQ(shipped.keep_labels, code.keep_labels);
  EXPECT_EQ(shipped.ema_point_map, code.ema_point_map);
}

TEST(FeatureConfigFile, RoundTripWithCenter) {
  testing::TempDir dir("features");
  FeatureConfig config = default_feature_config();
  std::mt19937_64 rng(11);
  config.center = fit_center({testing::random_contours("a", 5, rng)});
  save_feature_config(config, dir / "f.json");
  const FeatureConfig back = load_feature_config(dir / "f.json");
  ASSERT_TRUE(back.center.has_value());
  EXPECT_EQ(back.center->point_index, config.center->point_index);
  EXPECT_TRUE(back.center->point_std.isApprox(config.center->point_std, 1e-12));
  EXPECT_EQ(back.keep_labels, config.keep_labels);
}

}  // namespace
}  // namespace artic
