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

#include <random>

#include "artic/errors.hpp"
#include "artic/models/cbl.hpp"
#include "artic/models/hificar.hpp"
#include "artic/models/train.hpp"

namespace artic::models {
namespace {

MatrixX<float> random_features(Index t, Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> n(0.0f, 1.0f);
  return MatrixX<float>::NullaryExpr(t, d, [&] { return n(rng); });
}

TEST(GeneratorConfig, Validation) {
  EXPECT_NO_THROW(GeneratorConfig{}.validate());
  GeneratorConfig c;
  EXPECT_EQ(c.hop(), 240);
  c.upsample_factors = {8, 6, 4};
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.ar_context = -1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.input_dim = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(GeneratorConfig, JsonRoundTrip) {
  GeneratorConfig c = GeneratorConfig::tiny(12);
  c.chunk_frames = 5;
  const GeneratorConfig back = generator_config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_EQ(generator_config_from_json({{"preset", "tiny"}}).initial_channels, 32);
  EXPECT_THROW(generator_config_from_json({{"preset", "huge"}}), ConfigError);
}

TEST(HifiCar, ForwardLength) {
  HifiCarGenerator<float> g(GeneratorConfig::tiny(), 1);
  const MatrixX<float> f = random_features(10, kFeatureDim, 2);
  const auto history = Var<float>(nn::Tensor<float>::Zero(1, g.config().ar_context));
  EXPECT_EQ(g.forward(features_to_var(f), history).cols(), 2400);
  EXPECT_EQ(g.generate(f).size(), 2400);
}

TEST(HifiCar, LengthSweep) {
  HifiCarGenerator<float> g(GeneratorConfig::tiny(), 1);
  for (Index t = 1; t <= 50; ++t) {
    ASSERT_EQ(g.generate(random_features(t, kFeatureDim, t)).size(), t * 240) << t;
  }
}

TEST(HifiCar, ChunkedMatchesUnchunkedLength) {
  auto config = GeneratorConfig::tiny();
  HifiCarGenerator<float> chunked(config, 1);
  config.chunk_frames = 1000;
  HifiCarGenerator<float> whole(config, 1);
  const MatrixX<float> f = random_features(20, kFeatureDim, 3);
  EXPECT_EQ(chunked.generate(f).size(), whole.generate(f).size());
}

TEST(HifiCar, ZeroContextIsPlainForward) {
  auto config = GeneratorConfig::tiny();
  config.ar_context = 0;
  HifiCarGenerator<float> g(config, 4);
  const MatrixX<float> f = random_features(21, kFeatureDim, 5);
  const Eigen::VectorXf generated = g.generate(f);
  nn::NoGradGuard no_grad;
  const auto direct = g.forward(features_to_var(f), Var<float>());
  ASSERT_EQ(direct.cols(), generated.size());
  EXPECT_EQ(Eigen::VectorXf(direct.value().row(0).transpose()), generated);
}

TEST(HifiCar, Deterministic) {
  const MatrixX<float> f = random_features(12, kFeatureDim, 6);
  HifiCarGenerator<float> a(GeneratorConfig::tiny(), 7), b(GeneratorConfig::tiny(), 7);
  EXPECT_EQ(a.generate(f), a.generate(f));
  EXPECT_EQ(a.generate(f), b.generate(f));
  HifiCarGenerator<float> c(GeneratorConfig::tiny(), 8);
  EXPECT_NE(a.generate(f), c.generate(f));
}

TEST(HifiCar, ZeroWeightsGiveInputIndependentFiniteOutput) {
  HifiCarGenerator<float> g(GeneratorConfig::tiny(), 9);
  for (auto* p : g.parameters()) {
    if (p->name.find(".weight") != std::string::npos) p->value.setZero();
  }
  const Eigen::VectorXf a = g.generate(random_features(9, kFeatureDim, 10));
  const Eigen::VectorXf b = g.generate(random_features(9, kFeatureDim, 11));
  EXPECT_TRUE(a.allFinite());
  EXPECT_EQ(a, b);
}

TEST(HifiCar, InputDimMismatch) {
  HifiCarGenerator<float> g(GeneratorConfig::tiny(), 1);
  EXPECT_THROW(g.generate(random_features(5, 12, 1)), ShapeError);
}

TEST(HifiCar, FreeRunningIsCausalAcrossChunks) {
  HifiCarGenerator<float> g(GeneratorConfig::tiny(), 12);
  const Index chunk = g.config().chunk_frames;
  MatrixX<float> f = random_features(5 * chunk, kFeatureDim, 13);
  const Eigen::VectorXf before = g.generate(f);
  const Index t = 2 * chunk + 3;
  f.row(t).array() += 1.5f;
  const Eigen::VectorXf after = g.generate(f);
  const Index boundary = 2 * chunk * 240;
  EXPECT_EQ(before.head(boundary), after.head(boundary));
  EXPECT_NE(before.tail(before.size() - boundary), after.tail(after.size() - boundary));
}

TEST(HifiCar, TeacherForcedDiffersFromFreeRunning) {
  // A few training steps give a nontrivial model.
  TrainConfig train;
  train.segment_frames = 16;
  GanTrainer<float> trainer(GeneratorConfig::tiny(16), DiscriminatorConfig::tiny(), train);
  TrainingPair pair{"p", random_features(32, 16, 14), Eigen::VectorXf::Zero(32 * 240)};
  for (Index i = 0; i < pair.target.size(); ++i) pair.target[i] = 0.3f * std::sin(0.03f * static_cast<float>(i));
  trainer.train({pair}, 3);
  auto& g = trainer.generator();
  const Eigen::VectorXf free = g.generate(pair.features);
  const Eigen::VectorXf forced = g.generate_teacher_forced(pair.features, pair.target);
  ASSERT_EQ(free.size(), forced.size());
  // The first chunk sees zero history in both paths.
  const Index first = g.config().chunk_frames * 240;
  EXPECT_EQ(free.head(first), forced.head(first));
  EXPECT_NE(free, forced);
}

TEST(HifiCar, HistoryWindowZeroPadsTheStart) {
  HifiCarGenerator<float> g(GeneratorConfig::tiny(), 1);
  const Eigen::VectorXf signal = Eigen::VectorXf::LinSpaced(1000, 1.0f, 1000.0f);
  const auto w = g.history_window(signal, 100);
  ASSERT_EQ(w.cols(), 240);
  EXPECT_TRUE(w.leftCols(140).isZero(0.0f));
  EXPECT_EQ(w(0, 239), 100.0f);
  EXPECT_EQ(g.history_window(signal, 600)(0, 0), 361.0f);
}

TEST(HifiCar, FullScaleParameterCount) {
  HifiCarGenerator<float> g(GeneratorConfig::full_scale(), 1);
  const double n = static_cast<double>(g.parameter_count());
  EXPECT_GT(n, 1.35e7);
  EXPECT_LT(n, 1.65e7);
}

TEST(HifiCar, ParameterNamesAreUniqueAndShapesConsistent) {
  HifiCarGenerator<float> g(GeneratorConfig::tiny(), 1);
  std::set<std::string> names;
  for (auto* p : g.parameters()) {
    EXPECT_TRUE(names.insert(p->name).second) << p->name;
    std::int64_t count = 1;
    for (auto s : p->shape) count *= s;
    EXPECT_EQ(count, p->size()) << p->name;
  }
}

TEST(Cbl, ShapeContract) {
  CblNet<float> net(CblConfig::tiny(), 1);
  EXPECT_EQ(net.predict(random_features(10, kFeatureDim, 1)).rows(), 80);
  for (Index t = 1; t <= 50; ++t) {
    ASSERT_EQ(net.predict(random_features(t, kFeatureDim, t)).cols(), t) << t;
  }
  EXPECT_THROW(net.predict(random_features(4, 12, 1)), ShapeError);
}

TEST(Cbl, ZeroFinalLayerGivesZeroMel) {
  CblNet<float> net(CblConfig::tiny(), 2);
  net.output_layer().weight().value.setZero();
  net.output_layer().bias().value.setZero();
  const MatrixX<float> out = net.predict(MatrixX<float>::Zero(10, kFeatureDim));
  EXPECT_TRUE(out.isZero(0.0f));
}

TEST(Cbl, LayerCounts) {
  EXPECT_EQ(kCblConvLayers, 4);
  CblConfig c = CblConfig::tiny();
  c.kernel = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  const CblConfig back = cbl_config_from_json(to_json(CblConfig::tiny(12, 32)));
  EXPECT_EQ(back.input_dim, 12);
  EXPECT_EQ(back.output_dim, 32);
}

// Every parameter tensor receives gradient, and a few entries agree with
// central differences.
TEST(Cbl, GradientsNonzeroAndMatchFiniteDifferences) {
  CblConfig config = CblConfig::tiny(6, 5);
  CblNet<double> net(config, 3);
  const MatrixX<double> x = random_features(9, 6, 4).cast<double>();
  const MatrixX<double> target = random_features(5, 9, 5).cast<double>();
  const auto loss = [&] {
    const auto y = net.forward(Var<double>(x.transpose()));
    const Var<double> diff = y - Var<double>(target);
    return nn::mean(diff * diff);
  };
  auto params = net.parameters();
  nn::zero_grad(params);
  nn::backward(loss());
  for (auto* p : params) EXPECT_GT(p->grad.cwiseAbs().maxCoeff(), 0.0) << p->name;

  std::mt19937_64 rng(6);
  nn::NoGradGuard no_grad;
  for (int k = 0; k < 4; ++k) {
    auto* p = params[std::uniform_int_distribution<std::size_t>(0, params.size() - 1)(rng)];
    const Index i = std::uniform_int_distribution<Index>(0, p->size() - 1)(rng);
    const double saved = p->value.data()[i];
    p->value.data()[i] = saved + 1e-6;
    const double plus = loss().item();
    p->value.data()[i] = saved - 1e-6;
    const double minus = loss().item();
    p->value.data()[i] = saved;
    const double numeric = (plus - minus) / 2e-6;
    const double analytic = p->grad.data()[i];
    EXPECT_LT(std::abs(numeric - analytic) / std::max({std::abs(numeric), std::abs(analytic), 1e-8}), 1e-4)
        << p->name << "[" << i << "]";
  }
}

}  // namespace
}  // namespace artic::models
