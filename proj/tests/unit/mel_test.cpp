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
#include <numbers>

#include "artic/errors.hpp"
#include "artic/mel.hpp"

namespace artic {
namespace {

Waveform tone(Index n, double hz, float amp = 0.5f) {
  Waveform w;
  w.samples.resize(n);
  for (Index i = 0; i < n; ++i) w.samples[i] = amp * static_cast<float>(std::sin(2.0 * std::numbers::pi * hz * i / kSampleRate));
  return w;
}

TEST(Mel, TwentyFourHundredSamplesGiveTenFrames) {
  const MelSpectrogram m = melspectrogram(tone(2400, 440.0));
  EXPECT_EQ(m.values.rows(), 80);
  EXPECT_EQ(m.num_frames(), 10);
}

TEST(Mel, ShapeSweep) {
  for (Index n = 1; n <= 10 * 240; ++n) {
    Waveform w;
    w.samples = Eigen::VectorXf::Constant(n, 0.1f);
    ASSERT_EQ(melspectrogram(w).num_frames(), (n + 239) / 240) << n;
  }
}

TEST(Mel, SilenceIsLogFloor) {
  Waveform w;
  w.samples = Eigen::VectorXf::Zero(4800);
  const MelSpectrogram m = melspectrogram(w);
  EXPECT_TRUE(m.values.isConstant(static_cast<float>(std::log(1e-10)), 1e-6f));
}

// The band whose centre is closest to 1 kHz on the Slaney scale dominates.
TEST(Mel, ToneLandsInItsBand) {
  const MelConfig config;
  const MelSpectrogram m = melspectrogram(tone(24000, 1000.0), config);
  const double lo = hz_to_mel(config.fmin), hi = hz_to_mel(config.fmax);
  int expected = 0;
  double best = 1e300;
  for (int b = 0; b < config.n_mels; ++b) {
    const double centre = mel_to_hz(lo + (hi - lo) * (b + 1) / (config.n_mels + 1));
    if (std::abs(centre - 1000.0) < best) {
      best = std::abs(centre - 1000.0);
      expected = b;
    }
  }
  for (Index t = 3; t < m.num_frames() - 3; ++t) {
    Index arg;
    m.values.col(t).maxCoeff(&arg);
    EXPECT_EQ(arg, expected) << "frame " << t;
  }
  // Stable across interior frames.
  const auto row = m.values.row(expected).segment(3, m.num_frames() - 6);
  EXPECT_LT(row.maxCoeff() - row.minCoeff(), 1e-3f);
}

TEST(Mel, SlaneyScaleKnots) {
  EXPECT_NEAR(hz_to_mel(1000.0), 15.0, 1e-12);
  EXPECT_NEAR(mel_to_hz(hz_to_mel(3456.0)), 3456.0, 1e-9);
  EXPECT_NEAR(hz_to_mel(500.0), 7.5, 1e-12);
}

TEST(Mel, FilterbankAndWindow) {
  const MatrixX<double> fb = mel_filterbank({});
  EXPECT_EQ(fb.rows(), 80);
  EXPECT_EQ(fb.cols(), 513);
  EXPECT_GE(fb.minCoeff(), 0.0);
  // Nothing above 8 kHz.
  EXPECT_EQ(fb.rightCols(513 - 410).maxCoeff(), 0.0);
  const VectorX<double> w = hann_window(1024);
  EXPECT_DOUBLE_EQ(w[0], 0.0);
  EXPECT_NEAR(w[512], 1.0, 1e-15);
}

TEST(Mel, ReflectIndex) {
  EXPECT_EQ(reflect_index(-1, 5), 1);
  EXPECT_EQ(reflect_index(5, 5), 3);
  EXPECT_EQ(reflect_index(-7, 5), 1);
  EXPECT_EQ(reflect_index(0, 1), 0);
}

TEST(Mel, EmptyInputThrows) {
  EXPECT_THROW(melspectrogram(Waveform{}), Error);
}

TEST(Mel, Deterministic) {
  const Waveform w = tone(3000, 220.0);
  EXPECT_EQ(melspectrogram(w).values, melspectrogram(w).values);
}

}  // namespace
}  // namespace artic
