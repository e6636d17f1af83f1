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

#include "artic/models/cbl.hpp"

#include "artic/errors.hpp"
#include "artic/nn/ops.hpp"

namespace artic::models {

using nlohmann::json;

CblConfig CblConfig::full_scale(int input_dim, int output_dim) {
  CblConfig c;
  c.input_dim = input_dim;
  c.output_dim = output_dim;
  return c;
}

CblConfig CblConfig::tiny(int input_dim, int output_dim) {
  CblConfig c;
  c.input_dim = input_dim;
  c.output_dim = output_dim;
  c.conv_channels = 16;
  c.kernel = 3;
  c.lstm_hidden = 16;
  return c;
}

void CblConfig::validate() const {
  if (input_dim <= 0 || output_dim <= 0 || conv_channels <= 0 || lstm_hidden <= 0) {
    throw ConfigError("CBL sizes must be positive");
  }
  if (kernel % 2 == 0) throw ConfigError("CBL kernel must be odd");
}

json to_json(const CblConfig& c) {
  return {{"input_dim", c.input_dim},
          {"conv_channels", c.conv_channels},
          {"kernel", c.kernel},
          {"lstm_hidden", c.lstm_hidden},
          {"output_dim", c.output_dim},
          {"conv_layers", kCblConvLayers},
          {"pool_after", {2, 3}}};
}

CblConfig cbl_config_from_json(const json& doc) {
  CblConfig c;
  if (doc.value("preset", std::string("full")) == "tiny") c = CblConfig::tiny();
  try {
    c.input_dim = doc.value("input_dim", c.input_dim);
    c.conv_channels = doc.value("conv_channels", c.conv_channels);
    c.kernel = doc.value("kernel", c.kernel);
    c.lstm_hidden = doc.value("lstm_hidden", c.lstm_hidden);
    c.output_dim = doc.value("output_dim", c.output_dim);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("cbl config: ") + e.what());
  }
  c.validate();
  return c;
}

template <typename Scalar>
CblNet<Scalar>::CblNet(const CblConfig& config, std::uint64_t seed) : config_(config) {
  config_.validate();
  std::mt19937_64 rng(seed);
  Index channels = config_.input_dim;
  for (int i = 0; i < kCblConvLayers; ++i) {
    convs_.emplace_back("convs." + std::to_string(i), channels, config_.conv_channels, config_.kernel,
                        nn::ConvOptions{1, 1, config_.kernel / 2}, rng);
    channels = config_.conv_channels;
  }
  forward_lstm_ = nn::Lstm<Scalar>("lstm.forward", channels, config_.lstm_hidden, rng);
  backward_lstm_ = nn::Lstm<Scalar>("lstm.backward", channels, config_.lstm_hidden, rng);
  output_ = nn::Conv1d<Scalar>("output", 2 * config_.lstm_hidden, config_.output_dim, 1, nn::ConvOptions{}, rng);
}

template <typename Scalar>
Var<Scalar> CblNet<Scalar>::forward(const Var<Scalar>& features) {
  if (features.rows() != config_.input_dim) {
    throw ShapeError("CBL expects " + std::to_string(config_.input_dim) + " input channels, got " +
                     std::to_string(features.rows()));
  }
  const Index frames = features.cols();
  if (frames < 1) throw ShapeError("CBL needs at least one frame");
  Var<Scalar> x = features;
  for (int i = 0; i < kCblConvLayers; ++i) {
    x = nn::relu(convs_[static_cast<std::size_t>(i)](x));
    if (i == 1 || i == 2) x = nn::max_pool1d(x, kCblPoolSize);
  }
  x = nn::concat_rows<Scalar>({forward_lstm_(x, false), backward_lstm_(x, true)});
  x = output_(x);
  x = nn::upsample_nearest(x, kCblPoolSize * kCblPoolSize);
  return nn::slice_cols(x, 0, frames);
}

template <typename Scalar>
MatrixX<Scalar> CblNet<Scalar>::predict(const MatrixX<Scalar>& features) {
  nn::NoGradGuard no_grad;
  return forward(Var<Scalar>(features.transpose())).value();
}

template <typename Scalar>
nn::ParameterList<Scalar> CblNet<Scalar>::parameters() {
  nn::ParameterList<Scalar> params;
  for (auto& conv : convs_) conv.collect(params);
  forward_lstm_.collect(params);
  backward_lstm_.collect(params);
  output_.collect(params);
  return params;
}

template class CblNet<float>;
template class CblNet<double>;

}  // namespace artic::models
