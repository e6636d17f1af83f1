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

#ifndef ARTIC_NN_MODULES_HPP_
#define ARTIC_NN_MODULES_HPP_

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "artic/nn/autograd.hpp"
#include "artic/nn/ops.hpp"

namespace artic::nn {

// PyTorch-style default init: U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
template <typename Scalar>
void init_uniform(Parameter<Scalar>& p, double fan_in, std::mt19937_64& rng) {
  const double bound = 1.0 / std::sqrt(std::max(1.0, fan_in));
  std::uniform_real_distribution<double> dist(-bound, bound);
  p.value = p.value.unaryExpr([&](Scalar) { return static_cast<Scalar>(dist(rng)); });
}

template <typename Scalar>
void init_normal(Parameter<Scalar>& p, double stddev, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  p.value = p.value.unaryExpr([&](Scalar) { return static_cast<Scalar>(dist(rng)); });
}

template <typename Scalar>
class Conv1d {
 public:
  Conv1d() = default;
  Conv1d(const std::string& name, Index in_channels, Index out_channels, Index kernel,
         ConvOptions options, std::mt19937_64& rng, bool with_bias = true)
      : kernel_(kernel),
        options_(options),
        weight_(name + ".weight", {out_channels, in_channels, kernel}, out_channels, in_channels * kernel) {
    init_uniform(weight_, static_cast<double>(in_channels * kernel), rng);
    if (with_bias) {
      bias_ = Parameter<Scalar>(name + ".bias", {out_channels}, out_channels, 1);
      init_uniform(bias_, static_cast<double>(in_channels * kernel), rng);
    }
  }

  Var<Scalar> operator()(const Var<Scalar>& x) {
    const Var<Scalar> b = bias_.size() > 0 ? Var<Scalar>::parameter(bias_) : Var<Scalar>();
    return conv1d(x, Var<Scalar>::parameter(weight_), b, kernel_, options_);
  }

  void collect(ParameterList<Scalar>& out) {
    out.push_back(&weight_);
    if (bias_.size() > 0) out.push_back(&bias_);
  }

  Index in_channels() const { return weight_.value.cols() / kernel_; }
  Index out_channels() const { return weight_.value.rows(); }
  Parameter<Scalar>& weight() { return weight_; }
  Parameter<Scalar>& bias() { return bias_; }

 private:
  Index kernel_ = 1;
  ConvOptions options_;
  Parameter<Scalar> weight_;
  Parameter<Scalar> bias_;
};

template <typename Scalar>
class ConvTranspose1d {
 public:
  ConvTranspose1d() = default;
  ConvTranspose1d(const std::string& name, Index in_channels, Index out_channels, Index kernel,
                  ConvTransposeOptions options, std::mt19937_64& rng)
      : kernel_(kernel),
        options_(options),
        weight_(name + ".weight", {in_channels, out_channels, kernel}, in_channels, out_channels * kernel),
        bias_(name + ".bias", {out_channels}, out_channels, 1) {
    init_uniform(weight_, static_cast<double>(out_channels * kernel), rng);
    init_uniform(bias_, static_cast<double>(out_channels * kernel), rng);
  }

  Var<Scalar> operator()(const Var<Scalar>& x) {
    return conv_transpose1d(x, Var<Scalar>::parameter(weight_), Var<Scalar>::parameter(bias_), kernel_,
                            options_);
  }

  void collect(ParameterList<Scalar>& out) {
    out.push_back(&weight_);
    out.push_back(&bias_);
  }

  Parameter<Scalar>& weight() { return weight_; }

 private:
  Index kernel_ = 1;
  ConvTransposeOptions options_;
  Parameter<Scalar> weight_;
  Parameter<Scalar> bias_;
};

// Single-layer LSTM over the columns of a [input x T] sequence; gate order
// (input, forget, cell, output) as in PyTorch.
template <typename Scalar>
class Lstm {
 public:
  Lstm() = default;
  Lstm(const std::string& name, Index input_size, Index hidden_size, std::mt19937_64& rng)
      : hidden_(hidden_size),
        weight_ih_(name + ".weight_ih", {4 * hidden_size, input_size}, 4 * hidden_size, input_size),
        weight_hh_(name + ".weight_hh", {4 * hidden_size, hidden_size}, 4 * hidden_size, hidden_size),
        bias_ih_(name + ".bias_ih", {4 * hidden_size}, 4 * hidden_size, 1),
        bias_hh_(name + ".bias_hh", {4 * hidden_size}, 4 * hidden_size, 1) {
    for (auto* p : {&weight_ih_, &weight_hh_, &bias_ih_, &bias_hh_}) {
      init_uniform(*p, static_cast<double>(hidden_size), rng);
    }
  }

  // Returns [hidden x T]; `reverse` runs from the last column to the first.
  Var<Scalar> operator()(const Var<Scalar>& x, bool reverse) {
    const Index steps = x.cols();
    const Index h = hidden_;
    const Var<Scalar> w_hh = Var<Scalar>::parameter(weight_hh_);
    const Var<Scalar> bias = Var<Scalar>::parameter(bias_ih_) + Var<Scalar>::parameter(bias_hh_);
    const Var<Scalar> projected = matmul(Var<Scalar>::parameter(weight_ih_), x);
    Var<Scalar> hidden(Tensor<Scalar>::Zero(h, 1));
    Var<Scalar> cell(Tensor<Scalar>::Zero(h, 1));
    std::vector<Var<Scalar>> outputs(static_cast<std::size_t>(steps));
    for (Index i = 0; i < steps; ++i) {
      const Index t = reverse ? steps - 1 - i : i;
      const Var<Scalar> gates = slice_cols(projected, t, 1) + matmul(w_hh, hidden) + bias;
      const Var<Scalar> in_gate = sigmoid(slice_rows(gates, 0, h));
      const Var<Scalar> forget_gate = sigmoid(slice_rows(gates, h, h));
      const Var<Scalar> candidate = tanh(slice_rows(gates, 2 * h, h));
      const Var<Scalar> out_gate = sigmoid(slice_rows(gates, 3 * h, h));
      cell = forget_gate * cell + in_gate * candidate;
      hidden = out_gate * tanh(cell);
      outputs[static_cast<std::size_t>(t)] = hidden;
    }
    return concat_cols(outputs);
  }

  void collect(ParameterList<Scalar>& out) {
    out.push_back(&weight_ih_);
    out.push_back(&weight_hh_);
    out.push_back(&bias_ih_);
    out.push_back(&bias_hh_);
  }

 private:
  Index hidden_ = 0;
  Parameter<Scalar> weight_ih_;
  Parameter<Scalar> weight_hh_;
  Parameter<Scalar> bias_ih_;
  Parameter<Scalar> bias_hh_;
};

// Adam with decoupled bookkeeping per parameter name.
template <typename Scalar>
class Adam {
 public:
  struct Options {
    double lr = 2e-4;
    double beta1 = 0.8;
    double beta2 = 0.99;
    double eps = 1e-8;
  };

  Adam() = default;
  explicit Adam(const ParameterList<Scalar>& params, Options options = {}) : options_(options) {
    for (auto* p : params) {
      first_.push_back(Tensor<Scalar>::Zero(p->value.rows(), p->value.cols()));
      second_.push_back(Tensor<Scalar>::Zero(p->value.rows(), p->value.cols()));
    }
  }

  void step(const ParameterList<Scalar>& params, double lr) {
    ++steps_;
    const double c1 = 1.0 - std::pow(options_.beta1, static_cast<double>(steps_));
    const double c2 = 1.0 - std::pow(options_.beta2, static_cast<double>(steps_));
    const auto b1 = static_cast<Scalar>(options_.beta1);
    const auto b2 = static_cast<Scalar>(options_.beta2);
    for (std::size_t i = 0; i < params.size(); ++i) {
      Parameter<Scalar>& p = *params[i];
      if (p.grad.size() == 0) continue;
      first_[i] = b1 * first_[i] + (Scalar(1) - b1) * p.grad;
      second_[i] = b2 * second_[i] + (Scalar(1) - b2) * p.grad.cwiseAbs2();
      const auto step_size = static_cast<Scalar>(lr / c1);
      const auto denom_scale = static_cast<Scalar>(1.0 / std::sqrt(c2));
      p.value.array() -= step_size * first_[i].array() /
                         (second_[i].array().sqrt() * denom_scale + static_cast<Scalar>(options_.eps));
    }
  }

  long steps() const { return steps_; }
  void set_steps(long steps) { steps_ = steps; }
  std::vector<Tensor<Scalar>>& first_moments() { return first_; }
  std::vector<Tensor<Scalar>>& second_moments() { return second_; }
  const std::vector<Tensor<Scalar>>& first_moments() const { return first_; }
  const std::vector<Tensor<Scalar>>& second_moments() const { return second_; }

 private:
  Options options_;
  long steps_ = 0;
  std::vector<Tensor<Scalar>> first_;
  std::vector<Tensor<Scalar>> second_;
};

}  // namespace artic::nn

#endif  // ARTIC_NN_MODULES_HPP_
