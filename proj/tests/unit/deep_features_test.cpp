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

#include <fstream>

#include "artic/errors.hpp"
#include "artic/models/deep_features.hpp"
#include "test_util.hpp"

namespace artic::models {
namespace {

TEST(Interpolate, ConstantStaysConstant) {
  const MatrixX<float> f = MatrixX<float>::Constant(7, 4, 2.5f);
  const MatrixX<float> out = interpolate_features(f, 50.0, 83.0);
  EXPECT_EQ(out.rows(), 12);
  EXPECT_TRUE(out.isConstant(2.5f, 1e-6f));
}

TEST(Interpolate, SameRateIsIdentity) {
  const MatrixX<float> f = MatrixX<float>::Random(9, 3);
  EXPECT_EQ(interpolate_features(f, 83.0, 83.0), f);
}

TEST(Interpolate, RampIsLinearWithPinnedEndpoints) {
  MatrixX<float> f(2, 1);
  f << 0.0f, 1.0f;
  const MatrixX<float> out = interpolate_features(f, 50.0, 83.0);
  ASSERT_EQ(out.rows(), 3);  // round(2 * 83 / 50)
  EXPECT_FLOAT_EQ(out(0, 0), 0.0f);
  EXPECT_FLOAT_EQ(out(1, 0), 0.5f);
  EXPECT_FLOAT_EQ(out(2, 0), 1.0f);

  const MatrixX<float> fine = interpolate_features(f, 11);
  for (Index i = 0; i < 11; ++i) EXPECT_NEAR(fine(i, 0), static_cast<float>(i) / 10.0f, 1e-6f);
}

TEST(Interpolate, NeedsTwoFrames) {
  EXPECT_THROW(interpolate_features(MatrixX<float>::Zero(1, 3), 50.0, 83.0), Error);
  EXPECT_THROW(interpolate_features(MatrixX<float>::Zero(1, 3), 5), Error);
}

Waveform noise(Index n) {
  Waveform w;
  w.samples = Eigen::VectorXf::Random(n) * 0.3f;
  return w;
}

TEST(StubExtractor, DeterministicShapeAndRate) {
  StubDeepFeatureExtractor a(32, 5), b(32, 5), c(32, 6);
  const Waveform w = noise(4800);
  const DeepFeatures fa = a.extract(w, "u");
  EXPECT_EQ(fa.values.rows(), 20);
  EXPECT_EQ(fa.values.cols(), 32);
  EXPECT_DOUBLE_EQ(fa.rate, 20000.0 / 240.0);
  EXPECT_EQ(fa.values, b.extract(w, "u").values);
  EXPECT_NE(fa.values, c.extract(w, "u").values);
}

TEST(CommandExtractor, ReadsMatrixAndRate) {
  testing::TempDir dir("deep");
  // Writes a [2 x 1] ARTJ matrix holding 0 and 1, then prints the rate.
  const auto script = dir / "extract.sh";
  std::ofstream(script) << "#!/bin/sh\n"
                           "printf 'ARTJ\\001\\000\\000\\000\\002\\000\\000\\000\\001\\000\\000\\000"
                           "\\000\\000\\000\\000\\000\\000\\200\\077' > \"$2\"\n"
                           "echo 50\n";
  std::filesystem::permissions(script, std::filesystem::perms::owner_all);
  CommandDeepFeatureExtractor extractor(script.string() + " {wav} {out}");
  const DeepFeatures f = extractor.extract(noise(480), "u1");
  EXPECT_DOUBLE_EQ(f.rate, 50.0);
  ASSERT_EQ(f.values.rows(), 2);
  EXPECT_EQ(f.values(1, 0), 1.0f);
}

TEST(CommandExtractor, FailureNamesUtterance) {
  CommandDeepFeatureExtractor extractor("false {wav} {out}");
  try {
    extractor.extract(noise(480), "u42");
    FAIL() << "expected TransportError";
  } catch (const TransportError& e) {
    EXPECT_NE(std::string(e.what()).find("u42"), std::string::npos);
  }
  EXPECT_THROW(CommandDeepFeatureExtractor(""), ConfigError);
}

}  // namespace
}  // namespace artic::models
