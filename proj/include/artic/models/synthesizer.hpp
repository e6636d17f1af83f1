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

#ifndef ARTIC_MODELS_SYNTHESIZER_HPP_
#define ARTIC_MODELS_SYNTHESIZER_HPP_

#include <filesystem>
#include <memory>
#include <string>

#include <Eigen/Core>

#include "artic/models/cbl.hpp"
#include "artic/models/checkpoint.hpp"
#include "artic/models/hificar.hpp"
#include "artic/types.hpp"

namespace artic::models {

// Anything that turns time-major features [T x D] into T * 240 samples.
// A single instance keeps mutable generation state and must not be shared
// between concurrent callers.
class Synthesizer {
 public:
  virtual ~Synthesizer() = default;
  virtual std::string name() const = 0;
  virtual int input_dim() const = 0;
  virtual std::size_t parameter_count() = 0;
  virtual Eigen::VectorXf synthesize(const MatrixX<float>& features) = 0;
};

class HifiCarSynthesizer : public Synthesizer {
 public:
  explicit HifiCarSynthesizer(std::unique_ptr<HifiCarGenerator<float>> generator, std::string name = "hificar");

  std::string name() const override { return name_; }
  int input_dim() const override { return generator_->config().input_dim; }
  std::size_t parameter_count() override { return generator_->parameter_count(); }
  Eigen::VectorXf synthesize(const MatrixX<float>& features) override;

  HifiCarGenerator<float>& generator() { return *generator_; }

 private:
  std::unique_ptr<HifiCarGenerator<float>> generator_;
  std::string name_;
};

// Intermediate-representation pipeline: CNN-BiLSTM predicts mels or deep
// features, then a vocoder trained on that representation renders audio.
class CblSynthesizer : public Synthesizer {
 public:
  CblSynthesizer(std::unique_ptr<CblNet<float>> predictor, std::unique_ptr<HifiCarGenerator<float>> vocoder,
                 std::string name = "cbl");

  std::string name() const override { return name_; }
  int input_dim() const override { return predictor_->config().input_dim; }
  std::size_t parameter_count() override;
  Eigen::VectorXf synthesize(const MatrixX<float>& features) override;

 private:
  std::unique_ptr<CblNet<float>> predictor_;
  std::unique_ptr<HifiCarGenerator<float>> vocoder_;
  std::string name_;
};

// Rebuilds models from archives written by the trainers.
std::unique_ptr<HifiCarGenerator<float>> load_generator(const TensorArchive& archive);
std::unique_ptr<CblNet<float>> load_cbl(const TensorArchive& archive);

// A "hificar" checkpoint alone, or a "cbl" checkpoint plus its vocoder.
std::unique_ptr<Synthesizer> load_synthesizer(const std::filesystem::path& checkpoint,
                                              const std::filesystem::path& vocoder = {});

}  // namespace artic::models

#endif  // ARTIC_MODELS_SYNTHESIZER_HPP_
