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

#include "artic/mel.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "artic/errors.hpp"

namespace artic {

namespace {
constexpr double kMelLinearStep = 200.0 / 3.0;
constexpr double kMelBreakHz = 1000.0;
constexpr double kMelBreak = kMelBreakHz / kMelLinearStep;
const double kMelLogStep = std::log(6.4) / 27.0;
}  // namespace

double hz_to_mel(double hz) {
  if (hz < kMelBreakHz) return hz / kMelLinearStep;
  return kMelBreak + std::log(hz / kMelBreakHz) / kMelLogStep;
}

double mel_to_hz(double mel) {
  if (mel < kMelBreak) return mel * kMelLinearStep;
  return kMelBreakHz * std::exp(kMelLogStep * (mel - kMelBreak));
}

Index mel_num_frames(Index num_samples, int hop) { return (num_samples + hop - 1) / hop; }

MatrixX<double> mel_filterbank(const MelConfig& config) {
  const Index bins = config.n_fft / 2 + 1;
  const double mel_lo = hz_to_mel(config.fmin);
  const double mel_hi = hz_to_mel(config.fmax);
  std::vector<double> edges(static_cast<std::size_t>(config.n_mels + 2));
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) / (config.n_mels + 1));
  }
  MatrixX<double> fb = MatrixX<double>::Zero(config.n_mels, bins);
  for (Index m = 0; m < config.n_mels; ++m) {
    const double lo = edges[static_cast<std::size_t>(m)];
    const double mid = edges[static_cast<std::size_t>(m) + 1];
    const double hi = edges[static_cast<std::size_t>(m) + 2];
    const double norm = 2.0 / (hi - lo);
    for (Index k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * config.sample_rate / config.n_fft;
      const double rise = (f - lo) / (mid - lo);
      const double fall = (hi - f) / (hi - mid);
      fb(m, k) = std::max(0.0, std::min(rise, fall)) * norm;
    }
  }
  return fb;
}

VectorX<double> hann_window(int length) {
  VectorX<double> w(length);
  for (int i = 0; i < length; ++i) {
    w(i) = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / length);
  }
  return w;
}

Index reflect_index(Index i, Index n) {
  if (n == 1) return 0;
  const Index period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

MatrixX<float> log_mel(const Eigen::Ref<const Eigen::VectorXf>& samples, const MelConfig& config) {
  const Index n = samples.size();
  if (n == 0) throw Error("melspectrogram: empty waveform");
  const Index frames = mel_num_frames(n, config.hop);
  const Index half = config.n_fft / 2;
  const Index bins = half + 1;
  const VectorX<double> window = hann_window(config.n_fft);
  const MatrixX<double> fb = mel_filterbank(config);

  Eigen::FFT<double> fft;
  std::vector<double> frame(static_cast<std::size_t>(config.n_fft));
  std::vector<std::complex<double>> spectrum;
  MatrixX<double> power(bins, frames);
  for (Index t = 0; t < frames; ++t) {
    for (Index j = 0; j < config.n_fft; ++j) {
      const Index src = reflect_index(t * config.hop + j - half, n);
      frame[static_cast<std::size_t>(j)] = samples(src) * window(j);
    }
    fft.fwd(spectrum, frame);
    for (Index k = 0; k < bins; ++k) power(k, t) = std::norm(spectrum[static_cast<std::size_t>(k)]);
  }
  const MatrixX<double> mel = fb * power;
  return mel.cwiseMax(config.log_floor).array().log().matrix().cast<float>();
}

MelSpectrogram melspectrogram(const Waveform& wav, const MelConfig& config) {
  MelSpectrogram mel;
  mel.config = config;
  mel.values = log_mel(wav.samples, config);
  return mel;
}

}  // namespace artic
