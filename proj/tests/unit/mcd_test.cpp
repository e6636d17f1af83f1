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

#include <cmath>
#include <random>

#include "artic/errors.hpp"
#include "artic/eval/mcd.hpp"

namespace artic::eval {
namespace {

Waveform chirp(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> noise(0.0f, 0.02f);
  Waveform w;
  w.samples.resize(n);
  for (Index i = 0; i < n; ++i) {
    const float t = static_cast<float>(i) / kSampleRate;
    w.samples[i] = 0.4f * std::sin(2.0f * 3.14159265f * (200.0f + 300.0f * t) * t) + noise(rng);
  }
  return w;
}

MatrixX<double> random_cepstra(Index frames, Index order, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  return MatrixX<double>::NullaryExpr(frames, order + 1, [&] { return n(rng); });
}

TEST(Mcd, IdentityIsZero) {
  const Waveform w = chirp(8000, 1);
  EXPECT_EQ(mcd(w, w), 0.0);
  const MatrixX<double> c = random_cepstra(12, 13, 2);
  EXPECT_EQ(mcd_from_cepstra(c, c), 0.0);
}

TEST(Mcd, ConstantOffsetGivesScaledDistance) {
  const MatrixX<double> c = random_cepstra(15, 13, 3);
  MatrixX<double> shifted = c;
  shifted.col(4).array() += 0.25;
  EXPECT_NEAR(mcd_from_cepstra(c, shifted), kMcdScale * 0.25, 1e-12);
  EXPECT_NEAR(kMcdScale, 10.0 / std::log(10.0) * std::sqrt(2.0), 1e-12);
}

TEST(Mcd, EnergyCoefficientIgnored) {
  const MatrixX<double> c = random_cepstra(10, 13, 4);
  MatrixX<double> louder = c;
  louder.col(0).array() += 3.0;
  EXPECT_EQ(mcd_from_cepstra(c, louder), 0.0);

  const Waveform a = chirp(6000, 5);
  const Waveform b = chirp(6000, 6);
  Waveform a2 = a;
  Waveform b2 = b;
  a2.samples *= 2.0f;
  b2.samples *= 2.0f;
  EXPECT_NEAR(mcd(a, b), mcd(a2, b2), 1e-6);
}

TEST(Mcd, Symmetric) {
  const MatrixX<double> a = random_cepstra(9, 13, 7);
  const MatrixX<double> b = random_cepstra(13, 13, 8);
  EXPECT_NEAR(mcd_from_cepstra(a, b), mcd_from_cepstra(b, a), 1e-12);
  EXPECT_GT(mcd_from_cepstra(a, b), 0.0);
}

TEST(Mcd, TimeStretchAbsorbedByAlignment) {
  const MatrixX<double> a = random_cepstra(8, 13, 9);
  MatrixX<double> stretched(16, 14);
  for (Index i = 0; i < 16; ++i) stretched.row(i) = a.row(i / 2);
  EXPECT_NEAR(mcd_from_cepstra(a, stretched), 0.0, 1e-12);
}

TEST(Dtw, PathIsMonotoneAndSpansCorners) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Index r = 1 + trial % 7;
    const Index c = 1 + (trial * 3) % 11;
    const MatrixX<double> cost = MatrixX<double>::NullaryExpr(r, c, [&] { return u(rng); });
    const auto path = dtw_path(cost);
    ASSERT_FALSE(path.empty());
    EXPECT_EQ(path.front(), std::make_pair(Index{0}, Index{0}));
    EXPECT_EQ(path.back(), std::make_pair(r - 1, c - 1));
    for (std::size_t k = 1; k < path.size(); ++k) {
      const Index di = path[k].first - path[k - 1].first;
      const Index dj = path[k].second - path[k - 1].second;
      EXPECT_TRUE(di >= 0 && di <= 1 && dj >= 0 && dj <= 1 && di + dj > 0);
    }
  }
  EXPECT_THROW(dtw_path(MatrixX<double>(0, 3)), Error);
}

TEST(Dtw, FindsCheapDiagonal) {
  MatrixX<double> cost = MatrixX<double>::Constant(5, 5, 10.0);
  cost.diagonal().setZero();
  const auto path = dtw_path(cost);
  ASSERT_EQ(path.size(), 5u);
  for (Index k = 0; k < 5; ++k) EXPECT_EQ(path[k], std::make_pair(k, k));
}

TEST(Freqt, ZeroAlphaIsIdentity) {
  VectorX<double> c(6);
  c << 1.0, -0.5, 0.25, 0.1, -0.2, 0.05;
  const VectorX<double> out = freqt(c, 5, 0.0);
  EXPECT_LT((out - c).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(MelCepstrum, ShapeAndFinite) {
  const MatrixX<double> c = mel_cepstrum(chirp(4000, 11).samples);
  EXPECT_EQ(c.cols(), 14);
  EXPECT_GT(c.rows(), 0);
  EXPECT_TRUE(c.allFinite());
  const MatrixX<double> silent = mel_cepstrum(Eigen::VectorXf::Zero(2000));
  EXPECT_TRUE(silent.allFinite());
}

TEST(Mcd, Errors) {
  Waveform empty;
  EXPECT_THROW(mcd(empty, chirp(100, 1)), Error);
  Waveform other = chirp(4000, 1);
  other.sample_rate = 16000;
  EXPECT_THROW(mcd(chirp(4000, 1), other), Error);
  EXPECT_THROW(mcd_from_cepstra(random_cepstra(3, 13, 1), random_cepstra(3, 12, 1)), ShapeError);
}

TEST(McdResult, PopulationStd) {
  const McdResult r = make_mcd_result({"a", "b", "c", "d"}, {2.0, 4.0, 4.0, 6.0});
  EXPECT_DOUBLE_EQ(r.summary.mean, 4.0);
  EXPECT_DOUBLE_EQ(r.summary.std, std::sqrt(2.0));
  const auto j = r.to_json();
  EXPECT_EQ(j.at("per_utterance").size(), 4u);
}

}  // namespace
}  // namespace artic::eval
