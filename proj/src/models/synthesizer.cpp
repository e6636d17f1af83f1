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

#include "artic/models/synthesizer.hpp"

#include <utility>

#include "artic/errors.hpp"

namespace artic::models {

HifiCarSynthesizer::HifiCarSynthesizer(std::unique_ptr<HifiCarGenerator<float>> generator, std::string name)
    : generator_(std::move(generator)), name_(std::move(name)) {}

Eigen::VectorXf HifiCarSynthesizer::synthesize(const MatrixX<float>& features) {
  return generator_->generate(features);
}

CblSynthesizer::CblSynthesizer(std::unique_ptr<CblNet<float>> predictor,
                               std::unique_ptr<HifiCarGenerator<float>> vocoder, std::string name)
    : predictor_(std::move(predictor)), vocoder_(std::move(vocoder)), name_(std::move(name)) {
  if (predictor_->config().output_dim != vocoder_->config().input_dim) {
    throw ConfigError("CBL output dim " + std::to_string(predictor_->config().output_dim) +
                      " does not match vocoder input dim " + std::to_string(vocoder_->config().input_dim));
  }
}

std::size_t CblSynthesizer::parameter_count() {
  return predictor_->parameter_count() + vocoder_->parameter_count();
}

Eigen::VectorXf CblSynthesizer::synthesize(const MatrixX<float>& features) {
  const MatrixX<float> intermediate = predictor_->predict(features).transpose();
  return vocoder_->generate(intermediate);
}

std::unique_ptr<HifiCarGenerator<float>> load_generator(const TensorArchive& archive) {
  if (archive.metadata.value("kind", "") != "hificar" || !archive.metadata.contains("generator")) {
    throw FormatError("checkpoint does not hold a generator");
  }
  auto generator = std::make_unique<HifiCarGenerator<float>>(
      generator_config_from_json(archive.metadata.at("generator")), 0);
  load_parameters(archive, generator->parameters(), "generator.");
  return generator;
}

std::unique_ptr<CblNet<float>> load_cbl(const TensorArchive& archive) {
  if (archive.metadata.value("kind", "") != "cbl" || !archive.metadata.contains("cbl")) {
    throw FormatError("checkpoint does not hold a CNN-BiLSTM model");
  }
  auto model = std::make_unique<CblNet<float>>(cbl_config_from_json(archive.metadata.at("cbl")), 0);
  load_parameters(archive, model->parameters(), "cbl.");
  return model;
}

std::unique_ptr<Synthesizer> load_synthesizer(const std::filesystem::path& checkpoint,
                                              const std::filesystem::path& vocoder) {
  const TensorArchive archive = load_archive(checkpoint);
  const std::string kind = archive.metadata.value("kind", "");
  const std::string label = archive.metadata.value("model", kind);
  if (kind == "hificar") return std::make_unique<HifiCarSynthesizer>(load_generator(archive), label);
  if (kind == "cbl") {
    if (vocoder.empty()) throw ConfigError("CNN-BiLSTM synthesis needs a vocoder checkpoint");
    return std::make_unique<CblSynthesizer>(load_cbl(archive), load_generator(load_archive(vocoder)), label);
  }
  throw FormatError("unknown checkpoint kind '" + kind + "' in " + checkpoint.string());
}

}  // namespace artic::models
