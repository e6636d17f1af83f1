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

#include "artic/eval/mcd.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include <unsupported/Eigen/FFT>

#include "artic/errors.hpp"

namespace artic::eval {

using nlohmann::json;

json to_json(const McdConfig& c) {
  return {{"analysis", "warped real cepstrum (freqt)"},
          {"window", "blackman"},
          {"frame_length", c.frame_length},
          {"fft_size", c.fft_size},
          {"hop", c.hop},
          {"order", c.order},
          {"alpha", c.alpha},
          {"c0_excluded", true},
          {"alignment", "dtw"}};
}

VectorX<double> freqt(const Eigen::Ref<const VectorX<double>>& c, int order, double alpha) {
  const double b = 1.0 - alpha * alpha;
  VectorX<double> g = VectorX<double>::Zero(order + 1);
  VectorX<double> prev(order + 1);
  for (Index i = c.size() - 1; i >= 0; --i) {
    prev = g;
    g(0) = c(i) + alpha * prev(0);
    if (order >= 1) g(1) = b * prev(0) + alpha * prev(1);
    for (int j = 2; j <= order; ++j) g(j) = prev(j - 1) + alpha * (prev(j) - g(j - 1));
  }
  return g;
}

namespace {

VectorX<double> blackman(int n) {
  VectorX<double> w(n);
  if (n == 1) {
    w(0) = 1.0;
    return w;
  }
  for (int i = 0; i < n; ++i) {
    const double x = 2.0 * std::numbers::pi * i / (n - 1);
    w(i) = 0.42 - 0.5 * std::cos(x) + 0.08 * std::cos(2.0 * x);
  }
  return w;
}

}  // namespace

MatrixX<double> mel_cepstrum(const Eigen::Ref<const Eigen::VectorXf>& samples, const McdConfig& config) {
  if (samples.size() == 0) throw Error("mel_cepstrum: empty waveform");
  if (config.fft_size < config.frame_length) throw ConfigError("mcd fft_size must be >= frame_length");
  const Index n = samples.size();
  const Index frames = std::max<Index>(1, (n - config.frame_length + config.hop - 1) / config.hop + 1);
  const VectorX<double> window = blackman(config.frame_length);
  const int nfft = config.fft_size;
  const int bins = nfft / 2 + 1;
  const int cep_len = nfft / 2;  // warped from this many real cepstral terms

  Eigen::FFT<double> fft;
  std::vector<double> frame(nfft);
  std::vector<std::complex<double>> spectrum;
  std::vector<std::complex<double>> log_spectrum(nfft);
  std::vector<double> cepstrum;
  MatrixX<double> out(frames, config.order + 1);
  for (Index t = 0; t < frames; ++t) {
    std::fill(frame.begin(), frame.end(), 0.0);
    const Index start = t * config.hop;
    for (int i = 0; i < config.frame_length; ++i) {
      const Index k = start + i;
      if (k < n) frame[i] = static_cast<double>(samples(k)) * window(i);
    }
    fft.fwd(spectrum, frame);
    for (int k = 0; k < bins; ++k) {
      const double mag = std::max(std::abs(spectrum[k]), config.log_floor);
      log_spectrum[k] = std::log(mag);
      if (k > 0 && k < nfft - k) log_spectrum[nfft - k] = log_spectrum[k];
    }
    fft.inv(cepstrum, log_spectrum);
    VectorX<double> c(cep_len);
    c(0) = cepstrum[0];
    for (int k = 1; k < cep_len; ++k) c(k) = 2.0 * cepstrum[k];
    out.row(t) = freqt(c, config.order, config.alpha).transpose();
  }
  return out;
}

std::vector<std::pair<Index, Index>> dtw_path(const MatrixX<double>& cost) {
  const Index rows = cost.rows();
  const Index cols = cost.cols();
  if (rows == 0 || cols == 0) throw Error("dtw: empty cost matrix");
  constexpr double kInf = std::numeric_limits<double>::infinity();
  MatrixX<double> acc = MatrixX<double>::Constant(rows, cols, kInf);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      double best = (i == 0 && j == 0) ? 0.0 : kInf;
      if (i > 0 && j > 0) best = std::min(best, acc(i - 1, j - 1));
      if (i > 0) best = std::min(best, acc(i - 1, j));
      if (j > 0) best = std::min(best, acc(i, j - 1));
      acc(i, j) = cost(i, j) + best;
    }
  }
  std::vector<std::pair<Index, Index>> path{{rows - 1, cols - 1}};
  Index i = rows - 1;
  Index j = cols - 1;
  while (i > 0 || j > 0) {
    if (i == 0) {
      --j;
    } else if (j == 0) {
      --i;
    } else {
      const double diag = acc(i - 1, j - 1);
      const double up = acc(i - 1, j);
      const double left = acc(i, j - 1);
      if (diag <= up && diag <= left) {
        --i;
        --j;
      } else if (up <= left) {
        --i;
      } else {
        --j;
      }
    }
    path.emplace_back(i, j);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

double mcd_from_cepstra(const MatrixX<double>& reference, const MatrixX<double>& synthesized) {
  if (reference.rows() == 0 || synthesized.rows() == 0) throw Error("mcd: empty cepstral sequence");
  if (reference.cols() != synthesized.cols() || reference.cols() < 2) throw ShapeError("mcd: cepstral order mismatch");
  const Index dims = reference.cols() - 1;
  MatrixX<double> cost(reference.rows(), synthesized.rows());
  for (Index i = 0; i < reference.rows(); ++i) {
    for (Index j = 0; j < synthesized.rows(); ++j) {
      cost(i, j) = (reference.row(i).tail(dims) - synthesized.row(j).tail(dims)).norm();
    }
  }
  const auto path = dtw_path(cost);
  double total = 0.0;
  for (const auto& [i, j] : path) total += cost(i, j);
  return kMcdScale * total / static_cast<double>(path.size());
}

double mcd(const Waveform& reference, const Waveform& synthesized, const McdConfig& config) {
  if (reference.samples.size() == 0 || synthesized.samples.size() == 0) throw Error("mcd: empty waveform");
  if (reference.sample_rate != synthesized.sample_rate) throw Error("mcd: sample rates differ");
  return mcd_from_cepstra(mel_cepstrum(reference.samples, config), mel_cepstrum(synthesized.samples, config));
}

json McdResult::to_json() const {
  json per = json::array();
  for (std::size_t i = 0; i < values.size(); ++i) per.push_back({{"utterance_id", utterance_ids[i]}, {"mcd", values[i]}});
  return {{"per_utterance", per}, {"mean", summary.mean}, {"std", summary.std}};
}

McdResult make_mcd_result(std::vector<std::string> ids, std::vector<double> values) {
  McdResult r;
  r.summary = summarize(values);
  r.utterance_ids = std::move(ids);
  r.values = std::move(values);
  return r;
}

}  // namespace artic::eval
