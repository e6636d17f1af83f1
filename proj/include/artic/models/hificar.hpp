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

#ifndef ARTIC_MODELS_HIFICAR_HPP_
#define ARTIC_MODELS_HIFICAR_HPP_

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "artic/nn/autograd.hpp"
#include "artic/nn/modules.hpp"
#include "artic/nn/ops.hpp"
#include "artic/types.hpp"

namespace artic::models {

using nn::Index;
using nn::Tensor;
using nn::Var;

struct GeneratorConfig {
  int input_dim = kFeatureDim;
  std::vector<int> upsample_factors = {8, 6, 5};
  int initial_channels = 512;  // halved after every upsampling stage
  std::vector<int> resblock_kernels = {3, 7, 11};
  std::vector<std::vector<int>> resblock_dilations = {{1, 3, 5}, {1, 3, 5}, {1, 3, 5}};
  int ar_context = kSamplesPerFrame;  // samples of autoregressive history
  int history_channels = 64;
  int history_dim = 128;
  int chunk_frames = 8;  // frames per autoregressive generation chunk
  double lrelu_slope = 0.1;

  int hop() const;
  int channels_at(int stage) const { return initial_channels >> stage; }
  // Receptive field of the output stack in input frames (one side).
  int receptive_field_frames() const;
  // Throws ConfigError on a product other than 240, negative context, etc.
  void validate() const;

  // Presets: full-scale (about 1.5e7 parameters) and a CPU-friendly toy.
  static GeneratorConfig full_scale(int input_dim = kFeatureDim);
  static GeneratorConfig tiny(int input_dim = kFeatureDim);
};

nlohmann::json to_json(const GeneratorConfig& config);
GeneratorConfig generator_config_from_json(const nlohmann::json& doc);

// HiFi-GAN style generator conditioned on the preceding `ar_context` output
// samples through a strided convolutional history encoder.
template <typename Scalar>
class HifiCarGenerator {
 public:
  HifiCarGenerator(const GeneratorConfig& config, std::uint64_t seed);

  const GeneratorConfig& config() const { return config_; }

  // features: [D x T]; history: [1 x ar_context]. Returns [1 x T * 240].
  Var<Scalar> forward(const Var<Scalar>& features, const Var<Scalar>& history);

  // Free-running chunked generation on [T x D] features (time-major), each
  // chunk conditioned on the samples synthesized before it.
  VectorX<Scalar> generate(const MatrixX<Scalar>& features);

  // Chunked generation with history taken from `target` instead of the
  // model's own output.
  VectorX<Scalar> generate_teacher_forced(const MatrixX<Scalar>& features,
                                          const Eigen::Ref<const VectorX<Scalar>>& target);

  nn::ParameterList<Scalar> parameters();
  std::size_t parameter_count() { return nn::count_parameters(parameters()); }

  // History window ending at sample `end` of `signal`, zero-padded at the start.
  Tensor<Scalar> history_window(const Eigen::Ref<const VectorX<Scalar>>& signal, Index end) const;

 private:
  struct ResBlock {
    std::vector<nn::Conv1d<Scalar>> dilated;
    std::vector<nn::Conv1d<Scalar>> plain;
  };

  Var<Scalar> resblock(ResBlock& block, Var<Scalar> x);
  VectorX<Scalar> generate_impl(const MatrixX<Scalar>& features, const VectorX<Scalar>* target);

  GeneratorConfig config_;
  std::vector<nn::Conv1d<Scalar>> history_convs_;
  nn::Conv1d<Scalar> history_proj_;
  nn::Conv1d<Scalar> input_conv_;
  std::vector<nn::ConvTranspose1d<Scalar>> upsamples_;
  std::vector<ResBlock> blocks_;  // stage-major: stage * num_kernels + kernel
  nn::Conv1d<Scalar> output_conv_;
};

// Features are time-major [T x D]; the network works on [D x T].
template <typename Scalar>
Var<Scalar> features_to_var(const MatrixX<Scalar>& features) {
  return Var<Scalar>(features.transpose());
}

extern template class HifiCarGenerator<float>;
extern template class HifiCarGenerator<double>;

}  // namespace artic::models

#endif  // ARTIC_MODELS_HIFICAR_HPP_
