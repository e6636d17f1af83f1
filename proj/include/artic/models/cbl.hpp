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

#ifndef ARTIC_MODELS_CBL_HPP_
#define ARTIC_MODELS_CBL_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "artic/nn/autograd.hpp"
#include "artic/nn/modules.hpp"
#include "artic/types.hpp"

namespace artic::models {

using nn::Index;
using nn::Var;

// Four 1-D conv layers with max pooling after the second and third, a
// bidirectional LSTM and a linear projection to the intermediate features.
struct CblConfig {
  int input_dim = kFeatureDim;
  int conv_channels = 256;
  int kernel = 5;
  int lstm_hidden = 256;
  int output_dim = 80;

  static CblConfig full_scale(int input_dim = kFeatureDim, int output_dim = 80);
  static CblConfig tiny(int input_dim = kFeatureDim, int output_dim = 80);
  void validate() const;
};

inline constexpr int kCblConvLayers = 4;
inline constexpr int kCblPoolSize = 2;

nlohmann::json to_json(const CblConfig& config);
CblConfig cbl_config_from_json(const nlohmann::json& doc);

template <typename Scalar>
class CblNet {
 public:
  CblNet(const CblConfig& config, std::uint64_t seed);

  // features: [D x T] -> [output_dim x T]. The two pooling stages shrink
  // time to ceil(ceil(T/2)/2); a x4 nearest upsample and tail crop restore T.
  Var<Scalar> forward(const Var<Scalar>& features);

  // Time-major convenience wrapper: [T x D] -> [output_dim x T].
  MatrixX<Scalar> predict(const MatrixX<Scalar>& features);

  nn::ParameterList<Scalar> parameters();
  std::size_t parameter_count() { return nn::count_parameters(parameters()); }
  const CblConfig& config() const { return config_; }

  nn::Conv1d<Scalar>& output_layer() { return output_; }

 private:
  CblConfig config_;
  std::vector<nn::Conv1d<Scalar>> convs_;
  nn::Lstm<Scalar> forward_lstm_;
  nn::Lstm<Scalar> backward_lstm_;
  nn::Conv1d<Scalar> output_;
};

extern template class CblNet<float>;
extern template class CblNet<double>;

}  // namespace artic::models

#endif  // ARTIC_MODELS_CBL_HPP_
