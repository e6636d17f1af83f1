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
#include "artic/models/checkpoint.hpp"
#include "artic/models/synthesizer.hpp"
#include "artic/models/train.hpp"
#include "test_util.hpp"

namespace artic::models {
namespace {

using testing::TempDir;

TEST(Archive, RoundTrip) {
  TempDir dir("ckpt");
  TensorArchive a;
  a.metadata = {{"kind", "demo"}, {"step", 3}};
  a.tensors["w"] = {{2, 3}, {1, 2, 3, 4, 5, -6.5f}};
  a.tensors["empty"] = {{0}, {}};
  save_archive(a, dir / "a.artc");
  const TensorArchive b = load_archive(dir / "a.artc");
  EXPECT_EQ(b.metadata, a.metadata);
  ASSERT_EQ(b.tensors.size(), 2u);
  EXPECT_EQ(b.tensors.at("w").shape, (std::vector<std::int64_t>{2, 3}));
  EXPECT_EQ(b.tensors.at("w").data, a.tensors.at("w").data);
  EXPECT_TRUE(b.tensors.at("empty").data.empty());

  std::ifstream in(dir / "a.artc", std::ios::binary);
  char magic[4];
  in.read(magic, 4);
  EXPECT_EQ(std::string(magic, 4), "ARTC");
}

TEST(Archive, Errors) {
  TempDir dir("ckpt");
  EXPECT_THROW(load_archive(dir / "missing.artc"), LoadError);
  std::ofstream(dir / "bad.artc", std::ios::binary) << "JUNKJUNKJUNKJUNK";
  EXPECT_THROW(load_archive(dir / "bad.artc"), FormatError);
  TensorArchive a;
  a.tensors["w"] = {{4}, {1, 2, 3, 4}};
  save_archive(a, dir / "t.artc");
  std::filesystem::resize_file(dir / "t.artc", std::filesystem::file_size(dir / "t.artc") - 4);
  EXPECT_THROW(load_archive(dir / "t.artc"), FormatError);
}

TEST(InitFromPretrained, SelfCopiesEverything) {
  GanTrainer<float> source(GeneratorConfig::tiny(), DiscriminatorConfig::tiny(), {});
  TrainConfig other;
  other.seed = 77;
  GanTrainer<float> target(GeneratorConfig::tiny(), DiscriminatorConfig::tiny(), other);
  const InitReport report = target.init_generator_from(source.save_state());
  EXPECT_TRUE(report.skipped.empty());
  EXPECT_FALSE(report.warning.has_value());
  EXPECT_EQ(report.copied.size(), target.generator().parameters().size());
  const MatrixX<float> f = MatrixX<float>::Random(6, kFeatureDim);
  EXPECT_EQ(target.generator().generate(f), source.generator().generate(f));
  EXPECT_EQ(report.to_json().at("skipped").size(), 0u);
}

TEST(InitFromPretrained, VocoderIntoArticulatoryModelSkipsInputConv) {
  GanTrainer<float> vocoder(GeneratorConfig::tiny(80), DiscriminatorConfig::tiny(), {});
  GanTrainer<float> model(GeneratorConfig::tiny(kFeatureDim), DiscriminatorConfig::tiny(), {});
  std::map<std::string, std::vector<std::int64_t>> shapes;
  for (auto* p : model.generator().parameters()) shapes[p->name] = p->shape;

  const InitReport report = model.init_generator_from(vocoder.save_state());
  ASSERT_EQ(report.skipped.size(), 1u);
  EXPECT_EQ(report.skipped[0].first, "generator.input_conv.weight");
  EXPECT_EQ(report.skipped[0].second, "shape mismatch");
  EXPECT_EQ(report.copied.size(), model.generator().parameters().size() - 1);
  for (auto* p : model.generator().parameters()) EXPECT_EQ(p->shape, shapes[p->name]) << p->name;
}

TEST(InitFromPretrained, EmptyCheckpointWarns) {
  GanTrainer<float> model(GeneratorConfig::tiny(), DiscriminatorConfig::tiny(), {});
  const InitReport report = model.init_generator_from(TensorArchive{});
  EXPECT_TRUE(report.copied.empty());
  ASSERT_TRUE(report.warning.has_value());
  EXPECT_EQ(report.to_json().at("warning"), *report.warning);
  for (const auto& [name, reason] : report.skipped) EXPECT_EQ(reason, "missing") << name;
}

TEST(LoadParameters, StrictAboutShapes) {
  GanTrainer<float> vocoder(GeneratorConfig::tiny(80), DiscriminatorConfig::tiny(), {});
  GanTrainer<float> model(GeneratorConfig::tiny(), DiscriminatorConfig::tiny(), {});
  EXPECT_THROW(model.load_state(vocoder.save_state()), FormatError);
}

TEST(Synthesizer, LoadsTrainerCheckpoints) {
  TempDir dir("ckpt");
  GanTrainer<float> gan(GeneratorConfig::tiny(), DiscriminatorConfig::tiny(), {});
  save_archive(gan.save_state(), dir / "g.artc");
  const auto synth = load_synthesizer(dir / "g.artc");
  EXPECT_EQ(synth->input_dim(), kFeatureDim);
  EXPECT_EQ(synth->parameter_count(), gan.generator().parameter_count());
  const MatrixX<float> f = MatrixX<float>::Random(5, kFeatureDim);
  EXPECT_EQ(synth->synthesize(f), gan.generator().generate(f));

  GanTrainer<float> vocoder(GeneratorConfig::tiny(80), DiscriminatorConfig::tiny(), {});
  save_archive(vocoder.save_state(), dir / "v.artc");
  CblTrainer<float> cbl(CblConfig::tiny(kFeatureDim, 80), {});
  save_archive(cbl.save_state(), dir / "c.artc");
  EXPECT_THROW(load_synthesizer(dir / "c.artc"), ConfigError);
  const auto two_stage = load_synthesizer(dir / "c.artc", dir / "v.artc");
  EXPECT_EQ(two_stage->synthesize(f).size(), 5 * 240);

  CblTrainer<float> wrong(CblConfig::tiny(kFeatureDim, 32), {});
  save_archive(wrong.save_state(), dir / "w.artc");
  EXPECT_THROW(load_synthesizer(dir / "w.artc", dir / "v.artc"), ConfigError);
}

}  // namespace
}  // namespace artic::models
