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

#ifndef ARTIC_MODELS_DISCRIMINATORS_HPP_
#define ARTIC_MODELS_DISCRIMINATORS_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "artic/nn/autograd.hpp"
#include "artic/nn/modules.hpp"

namespace artic::models {

using nn::Index;
using nn::Var;

struct DiscLayer {
  int channels = 0;
  int kernel = 0;
  int stride = 1;
  int padding = 0;
};

struct DiscriminatorConfig {
  std::vector<int> periods = {2, 3, 5, 7, 11};
  std::vector<DiscLayer> period_layers = {
      {32, 5, 3, 2}, {128, 5, 3, 2}, {512, 5, 3, 2}, {1024, 5, 3, 2}, {1024, 5, 1, 2}};
  int num_scales = 3;
  std::vector<DiscLayer> scale_layers = {{128, 15, 1, 7},   {128, 41, 2, 20},  {256, 41, 2, 20},
                                         {512, 41, 4, 20},  {1024, 41, 4, 20}, {1024, 41, 1, 20},
                                         {1024, 5, 1, 2}};
  double lrelu_slope = 0.1;

  static DiscriminatorConfig full_scale() { return {}; }
  static DiscriminatorConfig tiny();
};

nlohmann::json to_json(const DiscriminatorConfig& config);
DiscriminatorConfig discriminator_config_from_json(const nlohmann::json& doc);

template <typename Scalar>
struct DiscriminatorOutput {
  std::vector<Var<Scalar>> scores;                     // one per sub-discriminator
  std::vector<std::vector<Var<Scalar>>> feature_maps;  // per sub-discriminator, per layer
};

// Multi-period and multi-scale discriminators behind one interface.
template <typename Scalar>
class Discriminators {
 public:
  Discriminators(const DiscriminatorConfig& config, std::uint64_t seed);

  // waveform: [1 x L]
  DiscriminatorOutput<Scalar> operator()(const Var<Scalar>& waveform);

  nn::ParameterList<Scalar> parameters();
  const DiscriminatorConfig& config() const { return config_; }

 private:
  struct Stack {
    std::vector<nn::Conv1d<Scalar>> convs;
    nn::Conv1d<Scalar> post;
  };

  Stack make_stack(const std::string& prefix, const std::vector<DiscLayer>& layers, std::mt19937_64& rng);
  void run_stack(Stack& stack, const Var<Scalar>& x, std::vector<Var<Scalar>>& maps, Var<Scalar>& score);

  DiscriminatorConfig config_;
  std::vector<Stack> period_stacks_;
  std::vector<Stack> scale_stacks_;
};

extern template class Discriminators<float>;
extern template class Discriminators<double>;

}  // namespace artic::models

#endif  // ARTIC_MODELS_DISCRIMINATORS_HPP_
