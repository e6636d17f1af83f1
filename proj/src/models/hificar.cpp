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

#include "artic/models/hificar.hpp"

#include <cmath>
#include <numeric>

#include "artic/errors.hpp"

namespace artic::models {

using nlohmann::json;

int GeneratorConfig::hop() const {
  return std::accumulate(upsample_factors.begin(), upsample_factors.end(), 1, std::multiplies<>());
}

int GeneratorConfig::receptive_field_frames() const {
  double samples = 3.0 * hop();  // input conv, kernel 7
  int rate = 1;
  for (int factor : upsample_factors) {
    rate *= factor;
    int widest = 0;
    for (std::size_t k = 0; k < resblock_kernels.size(); ++k) {
      int span = 0;
      for (int d : resblock_dilations[k]) span += (resblock_kernels[k] - 1) * (d + 1) / 2;
      widest = std::max(widest, span);
    }
    samples += static_cast<double>(widest) * hop() / rate;
  }
  samples += 3.0;  // output conv
  return static_cast<int>(std::ceil(samples / hop()));
}

void GeneratorConfig::validate() const {
  if (input_dim <= 0) throw ConfigError("generator input_dim must be positive");
  if (upsample_factors.empty() || hop() != kSamplesPerFrame) {
    throw ConfigError("product of upsample_factors must be " + std::to_string(kSamplesPerFrame));
  }
  if (ar_context < 0) throw ConfigError("ar_context must be >= 0");
  if (chunk_frames <= 0) throw ConfigError("chunk_frames must be positive");
  if (resblock_kernels.size() != resblock_dilations.size() || resblock_kernels.empty()) {
    throw ConfigError("resblock kernels and dilations must pair up");
  }
  for (int k : resblock_kernels) {
    if (k % 2 == 0) throw ConfigError("resblock kernels must be odd");
  }
  if (channels_at(static_cast<int>(upsample_factors.size())) < 1) {
    throw ConfigError("initial_channels too small for the number of upsampling stages");
  }
  if (ar_context > 0 && (history_channels <= 0 || history_dim <= 0)) {
    throw ConfigError("history encoder sizes must be positive");
  }
}

GeneratorConfig GeneratorConfig::full_scale(int input_dim) {
  GeneratorConfig config;
  config.input_dim = input_dim;
  return config;
}

GeneratorConfig GeneratorConfig::tiny(int input_dim) {
  GeneratorConfig config;
  config.input_dim = input_dim;
  config.initial_channels = 32;
  config.resblock_kernels = {3, 7};
  config.resblock_dilations = {{1, 3}, {1, 3}};
  config.history_channels = 8;
  config.history_dim = 8;
  return config;
}

json to_json(const GeneratorConfig& c) {
  return {{"input_dim", c.input_dim},
          {"upsample_factors", c.upsample_factors},
          {"initial_channels", c.initial_channels},
          {"resblock_kernels", c.resblock_kernels},
          {"resblock_dilations", c.resblock_dilations},
          {"ar_context", c.ar_context},
          {"history_channels", c.history_channels},
          {"history_dim", c.history_dim},
          {"chunk_frames", c.chunk_frames},
          {"lrelu_slope", c.lrelu_slope},
          {"receptive_field_frames", c.receptive_field_frames()}};
}

GeneratorConfig generator_config_from_json(const json& doc) {
  GeneratorConfig c;
  if (doc.contains("preset")) {
    const std::string preset = doc.at("preset").get<std::string>();
    if (preset == "tiny") {
      c = GeneratorConfig::tiny();
    } else if (preset != "full") {
      throw ConfigError("unknown generator preset '" + preset + "'");
    }
  }
  try {
    c.input_dim = doc.value("input_dim", c.input_dim);
    c.upsample_factors = doc.value("upsample_factors", c.upsample_factors);
    c.initial_channels = doc.value("initial_channels", c.initial_channels);
    c.resblock_kernels = doc.value("resblock_kernels", c.resblock_kernels);
    c.resblock_dilations = doc.value("resblock_dilations", c.resblock_dilations);
    c.ar_context = doc.value("ar_context", c.ar_context);
    c.history_channels = doc.value("history_channels", c.history_channels);
    c.history_dim = doc.value("history_dim", c.history_dim);
    c.chunk_frames = doc.value("chunk_frames", c.chunk_frames);
    c.lrelu_slope = doc.value("lrelu_slope", c.lrelu_slope);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("generator config: ") + e.what());
  }
  c.validate();
  return c;
}

template <typename Scalar>
HifiCarGenerator<Scalar>::HifiCarGenerator(const GeneratorConfig& config, std::uint64_t seed)
    : config_(config) {
  config_.validate();
  std::mt19937_64 rng(seed);
  constexpr double kInitStd = 0.01;

  int in_channels = config_.input_dim;
  if (config_.ar_context > 0) {
    int channels = 1;
    for (int i = 0; i < 3; ++i) {
      history_convs_.emplace_back("history.convs." + std::to_string(i), channels, config_.history_channels, 5,
                                  nn::ConvOptions{4, 1, 2}, rng);
      channels = config_.history_channels;
    }
    history_proj_ = nn::Conv1d<Scalar>("history.proj", config_.history_channels, config_.history_dim, 1,
                                       nn::ConvOptions{}, rng);
    in_channels += config_.history_dim;
  }
  input_conv_ = nn::Conv1d<Scalar>("input_conv", in_channels, config_.initial_channels, 7,
                                   nn::ConvOptions{1, 1, 3}, rng);

  const auto num_kernels = config_.resblock_kernels.size();
  for (std::size_t stage = 0; stage < config_.upsample_factors.size(); ++stage) {
    const int u = config_.upsample_factors[stage];
    const int cin = config_.channels_at(static_cast<int>(stage));
    const int cout = config_.channels_at(static_cast<int>(stage) + 1);
    upsamples_.emplace_back("upsamples." + std::to_string(stage), cin, cout, 2 * u,
                            nn::ConvTransposeOptions{u, u / 2 + u % 2, u % 2, 1}, rng);
    nn::init_normal(upsamples_.back().weight(), kInitStd, rng);
    for (std::size_t k = 0; k < num_kernels; ++k) {
      const int kernel = config_.resblock_kernels[k];
      const std::string prefix = "blocks." + std::to_string(stage * num_kernels + k);
      ResBlock block;
      const auto& dilations = config_.resblock_dilations[k];
      for (std::size_t j = 0; j < dilations.size(); ++j) {
        const int d = dilations[j];
        block.dilated.emplace_back(prefix + ".convs1." + std::to_string(j), cout, cout, kernel,
                                   nn::ConvOptions{1, d, d * (kernel - 1) / 2}, rng);
        block.plain.emplace_back(prefix + ".convs2." + std::to_string(j), cout, cout, kernel,
                                 nn::ConvOptions{1, 1, (kernel - 1) / 2}, rng);
        nn::init_normal(block.dilated.back().weight(), kInitStd, rng);
        nn::init_normal(block.plain.back().weight(), kInitStd, rng);
      }
      blocks_.push_back(std::move(block));
    }
  }
  output_conv_ = nn::Conv1d<Scalar>("output_conv", config_.channels_at(static_cast<int>(upsamples_.size())), 1,
                                    7, nn::ConvOptions{1, 1, 3}, rng);
}

template <typename Scalar>
Var<Scalar> HifiCarGenerator<Scalar>::resblock(ResBlock& block, Var<Scalar> x) {
  const auto slope = static_cast<Scalar>(config_.lrelu_slope);
  for (std::size_t j = 0; j < block.dilated.size(); ++j) {
    Var<Scalar> t = block.dilated[j](nn::leaky_relu(x, slope));
    t = block.plain[j](nn::leaky_relu(t, slope));
    x = t + x;
  }
  return x;
}

template <typename Scalar>
Var<Scalar> HifiCarGenerator<Scalar>::forward(const Var<Scalar>& features, const Var<Scalar>& history) {
  if (features.rows() != config_.input_dim) {
    throw ShapeError("generator expects " + std::to_string(config_.input_dim) + " input channels, got " +
                     std::to_string(features.rows()));
  }
  const Index frames = features.cols();
  if (frames < 1) throw ShapeError("generator needs at least one frame");
  const auto slope = static_cast<Scalar>(config_.lrelu_slope);

  Var<Scalar> x = features;
  if (config_.ar_context > 0) {
    if (!history.defined() || history.rows() != 1 || history.cols() != config_.ar_context) {
      throw ShapeError("history must be [1 x " + std::to_string(config_.ar_context) + "]");
    }
    Var<Scalar> h = history;
    for (auto& conv : history_convs_) h = nn::leaky_relu(conv(h), slope);
    h = history_proj_(nn::mean_cols(h));
    x = nn::concat_rows<Scalar>({x, nn::repeat_cols(h, frames)});
  }
  x = input_conv_(x);

  const auto num_kernels = config_.resblock_kernels.size();
  for (std::size_t stage = 0; stage < upsamples_.size(); ++stage) {
    x = upsamples_[stage](nn::leaky_relu(x, slope));
    Var<Scalar> acc = resblock(blocks_[stage * num_kernels], x);
    for (std::size_t k = 1; k < num_kernels; ++k) acc = acc + resblock(blocks_[stage * num_kernels + k], x);
    x = nn::scale(acc, static_cast<Scalar>(1.0 / static_cast<double>(num_kernels)));
  }
  x = output_conv_(nn::leaky_relu(x, Scalar(0.01)));
  return nn::tanh(x);
}

template <typename Scalar>
Tensor<Scalar> HifiCarGenerator<Scalar>::history_window(const Eigen::Ref<const VectorX<Scalar>>& signal,
                                                        Index end) const {
  const Index context = config_.ar_context;
  Tensor<Scalar> window = Tensor<Scalar>::Zero(1, context);
  const Index available = std::min<Index>(context, std::min<Index>(end, signal.size()));
  if (available > 0) {
    window.row(0).tail(available) = signal.segment(end - available, available).transpose();
  }
  return window;
}

template <typename Scalar>
VectorX<Scalar> HifiCarGenerator<Scalar>::generate_impl(const MatrixX<Scalar>& features,
                                                        const VectorX<Scalar>* target) {
  nn::NoGradGuard no_grad;
  const Index frames = features.rows();
  const Index hop = config_.hop();
  if (frames == 0) return VectorX<Scalar>();
  if (config_.ar_context == 0) {
    return forward(features_to_var(features), Var<Scalar>()).value().row(0).transpose();
  }
  VectorX<Scalar> out = VectorX<Scalar>::Zero(frames * hop);
  for (Index start = 0; start < frames; start += config_.chunk_frames) {
    const Index n = std::min<Index>(config_.chunk_frames, frames - start);
    const Tensor<Scalar> history = history_window(target ? *target : out, start * hop);
    const Var<Scalar> chunk = forward(Var<Scalar>(features.middleRows(start, n).transpose()), Var<Scalar>(history));
    out.segment(start * hop, n * hop) = chunk.value().row(0).transpose();
  }
  return out;
}

template <typename Scalar>
VectorX<Scalar> HifiCarGenerator<Scalar>::generate(const MatrixX<Scalar>& features) {
  return generate_impl(features, nullptr);
}

template <typename Scalar>
VectorX<Scalar> HifiCarGenerator<Scalar>::generate_teacher_forced(
    const MatrixX<Scalar>& features, const Eigen::Ref<const VectorX<Scalar>>& target) {
  const VectorX<Scalar> copy = target;
  return generate_impl(features, &copy);
}

template <typename Scalar>
nn::ParameterList<Scalar> HifiCarGenerator<Scalar>::parameters() {
  nn::ParameterList<Scalar> params;
  for (auto& conv : history_convs_) conv.collect(params);
  if (config_.ar_context > 0) history_proj_.collect(params);
  input_conv_.collect(params);
  const auto num_kernels = config_.resblock_kernels.size();
  for (std::size_t stage = 0; stage < upsamples_.size(); ++stage) {
    upsamples_[stage].collect(params);
    for (std::size_t k = 0; k < num_kernels; ++k) {
      auto& block = blocks_[stage * num_kernels + k];
      for (auto& conv : block.dilated) conv.collect(params);
      for (auto& conv : block.plain) conv.collect(params);
    }
  }
  output_conv_.collect(params);
  return params;
}

template class HifiCarGenerator<float>;
template class HifiCarGenerator<double>;

}  // namespace artic::models
