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

#ifndef ARTIC_MEL_HPP_
#define ARTIC_MEL_HPP_

#include "artic/audio.hpp"
#include "artic/types.hpp"

namespace artic {

struct MelConfig {
  int sample_rate = kSampleRate;
  int n_fft = 1024;
  int hop = 240;
  int n_mels = 80;
  double fmin = 0.0;
  double fmax = 8000.0;
  double log_floor = 1e-10;
};

// [80 x F] log mel power, F = ceil(N / hop). Frames are centred on
// t * hop and the signal is reflection-padded by n_fft / 2 on both sides.
struct MelSpectrogram {
  MatrixX<float> values;
  MelConfig config;
  Index num_frames() const { return values.cols(); }
};

Index mel_num_frames(Index num_samples, int hop);

// Slaney-scale triangular filters with area normalisation, [n_mels x n_fft/2+1].
MatrixX<double> mel_filterbank(const MelConfig& config);
double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Periodic Hann window of the given length.
VectorX<double> hann_window(int length);

// Mirror index into [0, n) with repeated reflection (no edge repeat).
Index reflect_index(Index i, Index n);

// Throws Error on empty input.
MelSpectrogram melspectrogram(const Waveform& wav, const MelConfig& config = {});
MatrixX<float> log_mel(const Eigen::Ref<const Eigen::VectorXf>& samples, const MelConfig& config = {});

}  // namespace artic

#endif  // ARTIC_MEL_HPP_
