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

#include "artic/models/discriminators.hpp"

#include "artic/errors.hpp"
#include "artic/nn/ops.hpp"

namespace artic::models {

using nlohmann::json;

DiscriminatorConfig DiscriminatorConfig::tiny() {
  DiscriminatorConfig config;
  config.periods = {2, 3, 5};
  config.period_layers = {{4, 5, 3, 2}, {8, 5, 3, 2}, {16, 5, 3, 2}, {16, 5, 1, 2}};
  config.num_scales = 2;
  config.scale_layers = {{8, 15, 1, 7}, {16, 41, 4, 20}, {16, 41, 4, 20}, {16, 5, 1, 2}};
  return config;
}

namespace {

json layers_to_json(const std::vector<DiscLayer>& layers) {
  json out = json::array();
  for (const auto& l : layers) out.push_back({l.channels, l.kernel, l.stride, l.padding});
  return out;
}

std::vector<DiscLayer> layers_from_json(const json& doc) {
  std::vector<DiscLayer> layers;
  for (const auto& l : doc) {
    const auto v = l.get<std::vector<int>>();
    if (v.size() != 4) throw ConfigError("discriminator layer must be [channels, kernel, stride, padding]");
    layers.push_back({v[0], v[1], v[2], v[3]});
  }
  return layers;
}

}  // namespace

json to_json(const DiscriminatorConfig& c) {
  return {{"periods", c.periods},
          {"period_layers", layers_to_json(c.period_layers)},
          {"num_scales", c.num_scales},
          {"scale_layers", layers_to_json(c.scale_layers)},
          {"lrelu_slope", c.lrelu_slope}};
}

DiscriminatorConfig discriminator_config_from_json(const json& doc) {
  DiscriminatorConfig c;
  if (doc.value("preset", std::string("full")) == "tiny") c = DiscriminatorConfig::tiny();
  try {
    c.periods = doc.value("periods", c.periods);
    if (doc.contains("period_layers")) c.period_layers = layers_from_json(doc.at("period_layers"));
    c.num_scales = doc.value("num_scales", c.num_scales);
    if (doc.contains("scale_layers")) c.scale_layers = layers_from_json(doc.at("scale_layers"));
    c.lrelu_slope = doc.value("lrelu_slope", c.lrelu_slope);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("discriminator config: ") + e.what());
  }
  return c;
}

template <typename Scalar>
typename Discriminators<Scalar>::Stack Discriminators<Scalar>::make_stack(const std::string& prefix,
                                                                          const std::vector<DiscLayer>& layers,
                                                                          std::mt19937_64& rng) {
  Stack stack;
  Index channels = 1;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const DiscLayer& l = layers[i];
    stack.convs.emplace_back(prefix + ".convs." + std::to_string(i), channels, l.channels, l.kernel,
                             nn::ConvOptions{l.stride, 1, l.padding}, rng);
    channels = l.channels;
  }
  stack.post = nn::Conv1d<Scalar>(prefix + ".post", channels, 1, 3, nn::ConvOptions{1, 1, 1}, rng);
  return stack;
}

template <typename Scalar>
Discriminators<Scalar>::Discriminators(const DiscriminatorConfig& config, std::uint64_t seed) : config_(config) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < config_.periods.size(); ++i) {
    period_stacks_.push_back(make_stack("mpd." + std::to_string(i), config_.period_layers, rng));
  }
  for (int i = 0; i < config_.num_scales; ++i) {
    scale_stacks_.push_back(make_stack("msd." + std::to_string(i), config_.scale_layers, rng));
  }
}

template <typename Scalar>
void Discriminators<Scalar>::run_stack(Stack& stack, const Var<Scalar>& x, std::vector<Var<Scalar>>& maps,
                                       Var<Scalar>& score) {
  const auto slope = static_cast<Scalar>(config_.lrelu_slope);
  Var<Scalar> h = x;
  for (auto& conv : stack.convs) {
    h = nn::leaky_relu(conv(h), slope);
    maps.push_back(h);
  }
  score = stack.post(h);
  maps.push_back(score);
}

template <typename Scalar>
DiscriminatorOutput<Scalar> Discriminators<Scalar>::operator()(const Var<Scalar>& waveform) {
  DiscriminatorOutput<Scalar> out;
  for (std::size_t i = 0; i < period_stacks_.size(); ++i) {
    const Index period = config_.periods[i];
    const Index remainder = waveform.cols() % period;
    const Var<Scalar> padded =
        remainder == 0 ? waveform : nn::reflect_pad_cols(waveform, 0, period - remainder);
    // Each phase is one column of the [L/p x p] view; the 2-D (k, 1) kernels
    // reduce to the same 1-D stack applied to every phase.
    std::vector<std::vector<Var<Scalar>>> phase_maps(static_cast<std::size_t>(period));
    std::vector<Var<Scalar>> phase_scores(static_cast<std::size_t>(period));
    for (Index phase = 0; phase < period; ++phase) {
      run_stack(period_stacks_[i], nn::stride_cols(padded, phase, period),
                phase_maps[static_cast<std::size_t>(phase)], phase_scores[static_cast<std::size_t>(phase)]);
    }
    std::vector<Var<Scalar>> maps;
    for (std::size_t layer = 0; layer < phase_maps.front().size(); ++layer) {
      std::vector<Var<Scalar>> parts;
      for (auto& pm : phase_maps) parts.push_back(pm[layer]);
      maps.push_back(nn::concat_cols(parts));
    }
    out.scores.push_back(nn::concat_cols(phase_scores));
    out.feature_maps.push_back(std::move(maps));
  }
  Var<Scalar> x = waveform;
  for (std::size_t i = 0; i < scale_stacks_.size(); ++i) {
    if (i > 0) x = nn::avg_pool1d(x, 4, 2, 2);
    std::vector<Var<Scalar>> maps;
    Var<Scalar> score;
    run_stack(scale_stacks_[i], x, maps, score);
    out.scores.push_back(score);
    out.feature_maps.push_back(std::move(maps));
  }
  return out;
}

template <typename Scalar>
nn::ParameterList<Scalar> Discriminators<Scalar>::parameters() {
  nn::ParameterList<Scalar> params;
  for (auto* group : {&period_stacks_, &scale_stacks_}) {
    for (auto& stack : *group) {
      for (auto& conv : stack.convs) conv.collect(params);
      stack.post.collect(params);
    }
  }
  return params;
}

template class Discriminators<float>;
template class Discriminators<double>;

}  // namespace artic::models
