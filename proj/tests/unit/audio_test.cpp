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
#include <random>

#include "artic/audio.hpp"
#include "artic/errors.hpp"
#include "test_util.hpp"

namespace artic {
namespace {

Waveform constant(Index n, float v, int rate = kSampleRate) {
  Waveform w;
  w.samples = Eigen::VectorXf::Constant(n, v);
  w.sample_rate = rate;
  return w;
}

// Sum of sinusoids below `max_hz`.
Waveform band_limited(Index n, int rate, double max_hz, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> freq(50.0, max_hz), phase(0.0, 2.0 * std::numbers::pi);
  Waveform w;
  w.sample_rate = rate;
  w.samples = Eigen::VectorXf::Zero(n);
  for (int k = 0; k < 12; ++k) {
    const double f = freq(rng), p = phase(rng);
    for (Index i = 0; i < n; ++i) {
      w.samples[i] += static_cast<float>(0.05 * std::sin(2.0 * std::numbers::pi * f * i / rate + p));
    }
  }
  return w;
}

TEST(MixTargets, Examples) {
  EXPECT_TRUE(mix_targets(constant(10, 1.0f), constant(10, 0.0f)).samples.isApproxToConstant(0.9f, 1e-7f));
  EXPECT_TRUE(mix_targets(constant(10, 0.0f), constant(10, 0.5f)).samples.isApproxToConstant(0.05f, 1e-7f));
  Waveform y;
  y.samples = Eigen::VectorXf::LinSpaced(64, -0.7f, 0.7f);
  const Waveform m = mix_targets(y, y);
  EXPECT_TRUE(m.samples.isApprox(y.samples, 1e-6f));
  EXPECT_EQ(m.provenance, Provenance::kMixed);
}

TEST(MixTargets, Linear) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<float> u(-0.5f, 0.5f);
  Waveform e, o;
  e.samples = Eigen::VectorXf::NullaryExpr(500, [&] { return u(rng); });
  o.samples = Eigen::VectorXf::NullaryExpr(500, [&] { return u(rng); });
  for (float a : {0.0f, 0.3f, -1.0f, 1.7f}) {
    Waveform ea = e, oa = o;
    ea.samples *= a;
    oa.samples *= a;
    const Eigen::VectorXf lhs = mix_targets(ea, oa).samples;
    const Eigen::VectorXf rhs = a * mix_targets(e, o).samples;
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-6f);
  }
}

TEST(MixTargets, RejectsMisalignedInputs) {
  EXPECT_THROW(mix_targets(constant(10, 0.0f), constant(11, 0.0f)), AlignmentError);
  EXPECT_THROW(mix_targets(constant(10, 0.0f), constant(10, 0.0f, 16000)), AlignmentError);
}

ArticulatoryTrajectory frames(Index t) {
  ArticulatoryTrajectory traj;
  traj.data = FrameMatrix::Random(t, kFeatureDim);
  return traj;
}

TEST(Reconcile, Examples) {
  auto [a, wa] = reconcile_lengths(frames(10), constant(2400, 0.1f));
  EXPECT_EQ(a.num_frames(), 10);
  EXPECT_EQ(wa.size(), 2400);
  auto [b, wb] = reconcile_lengths(frames(10), constant(2500, 0.1f));
  EXPECT_EQ(b.num_frames(), 10);
  EXPECT_EQ(wb.size(), 2400);
  const auto traj = frames(11);
  auto [c, wc] = reconcile_lengths(traj, constant(2400, 0.1f));
  EXPECT_EQ(c.num_frames(), 10);
  EXPECT_EQ(c.data, traj.data.topRows(10));
  EXPECT_EQ(wc.size(), 2400);
}

TEST(Reconcile, AlwaysConsistent) {
  for (Index t = 0; t < 20; ++t) {
    for (Index n : {0, 1, 239, 240, 241, 2399, 4801}) {
      auto [traj, wav] = reconcile_lengths(frames(t), constant(n, 0.0f));
      EXPECT_EQ(wav.size(), traj.num_frames() * kSamplesPerFrame);
      EXPECT_EQ(traj.num_frames(), std::min<Index>(t, n / kSamplesPerFrame));
    }
  }
}

TEST(Resample, LengthArithmetic) {
  for (Index n : {1, 7, 480, 48000, 96017}) {
    const Waveform out = resample(constant(n, 0.0f, 48000), 20000);
    EXPECT_EQ(out.size(), static_cast<Index>(std::llround(n * 20000.0 / 48000.0))) << n;
    EXPECT_EQ(out.sample_rate, 20000);
  }
}

TEST(Resample, IdentityRateIsBitIdentical) {
  const Waveform w = band_limited(3000, 20000, 8000, 2);
  const Waveform out = resample(w, 20000);
  ASSERT_EQ(out.size(), w.size());
  EXPECT_EQ(std::memcmp(out.samples.data(), w.samples.data(), sizeof(float) * w.size()), 0);
}

TEST(Resample, PreservesDc) {
  for (int from : {48000, 16000, 44100}) {
    const Waveform out = resample(constant(from / 2, 0.4f, from), 20000);
    EXPECT_LE((out.samples.array() - 0.4f).abs().maxCoeff(), 1e-4f) << from;
  }
}

TEST(Resample, RoundTripBelowMinus40Db) {
  const Waveform x = band_limited(20000, 20000, 8000, 3);
  const Waveform back = resample(resample(x, 40000), 20000);
  ASSERT_EQ(back.size(), x.size());
  // Ignore the filter edges.
  const Index edge = 200;
  const Eigen::VectorXf err = back.samples.segment(edge, x.size() - 2 * edge) - x.samples.segment(edge, x.size() - 2 * edge);
  const double rms_err = std::sqrt(err.squaredNorm() / err.size());
  const double rms_sig = std::sqrt(x.samples.segment(edge, x.size() - 2 * edge).squaredNorm() / err.size());
  EXPECT_LT(20.0 * std::log10(rms_err / rms_sig), -40.0);
}

TEST(Resample, RejectsNonPositiveRate) { EXPECT_THROW(resample(constant(10, 0.0f), 0), ConfigError); }

TEST(Wav, Pcm16RoundTrip) {
  testing::TempDir dir("wav");
  Waveform w;
  w.samples = Eigen::VectorXf::LinSpaced(1000, -1.0f, 1.0f);
  write_wav(w, dir / "a.wav");
  const WavInfo info = read_wav_info(dir / "a.wav");
  EXPECT_EQ(info.sample_rate, 20000);
  EXPECT_EQ(info.channels, 1);
  EXPECT_EQ(info.bits_per_sample, 16);
  EXPECT_EQ(info.num_frames, 1000);
  const Waveform r = read_wav(dir / "a.wav");
  EXPECT_LE((r.samples - w.samples).cwiseAbs().maxCoeff(), 1.0f / 32767.0f);
  EXPECT_EQ(decode_wav(encode_wav(w)).samples, r.samples);
}

TEST(Wav, Errors) {
  testing::TempDir dir("wav");
  EXPECT_THROW(read_wav(dir / "missing.wav"), LoadError);
  EXPECT_THROW(decode_wav({'R', 'I', 'F', 'F', 0, 0}), FormatError);
}

}  // namespace
}  // namespace artic
