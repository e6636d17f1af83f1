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

#include "artic/models/deep_features.hpp"

#include <cmath>
#include <random>

#include "artic/errors.hpp"
#include "artic/mel.hpp"
#include "artic/trajectory.hpp"
#include "process.hpp"

namespace artic::models {

StubDeepFeatureExtractor::StubDeepFeatureExtractor(int dim, std::uint64_t seed) {
  if (dim < 1) throw ConfigError("deep feature dim must be >= 1");
  const MelConfig mel;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(mel.n_mels)));
  projection_.resize(mel.n_mels, dim);
  for (Index i = 0; i < projection_.size(); ++i) projection_.data()[i] = static_cast<float>(normal(rng));
}

DeepFeatures StubDeepFeatureExtractor::extract(const Waveform& wav, const std::string& /*utterance_id*/) {
  const MelConfig mel;
  const MatrixX<float> values = log_mel(wav.samples, mel).transpose() * projection_;
  return {values, static_cast<double>(mel.sample_rate) / mel.hop};
}

CommandDeepFeatureExtractor::CommandDeepFeatureExtractor(std::string command) : command_(std::move(command)) {
  if (command_.empty()) throw ConfigError("deep feature command is empty");
}

DeepFeatures CommandDeepFeatureExtractor::extract(const Waveform& wav, const std::string& utterance_id) {
  internal::ScratchDir scratch;
  const auto wav_path = scratch.path() / "input.wav";
  const auto out_path = scratch.path() / "features.artj";
  write_wav(wav.sample_rate == kSampleRate ? wav : resample(wav, kSampleRate), wav_path);
  std::string command = internal::replace_all(command_, "{wav}", internal::shell_quote(wav_path.string()));
  command = internal::replace_all(command, "{out}", internal::shell_quote(out_path.string()));
  const auto result = internal::run_capture(command);
  if (result.exit_code != 0) {
    throw TransportError(utterance_id + ": deep feature command exited with status " +
                         std::to_string(result.exit_code));
  }
  DeepFeatures features;
  try {
    features.rate = std::stod(result.output);
    features.values = read_matrix(out_path);
  } catch (const std::exception& e) {
    throw TransportError(utterance_id + ": bad deep feature output: " + e.what());
  }
  if (!(features.rate > 0.0)) throw TransportError(utterance_id + ": deep feature rate must be positive");
  return features;
}

MatrixX<float> interpolate_features(const MatrixX<float>& features, Index frames) {
  const Index source = features.rows();
  if (source < 2) throw Error("interpolation needs at least 2 source frames");
  if (frames < 1) throw Error("interpolation target must have at least 1 frame");
  MatrixX<float> out(frames, features.cols());
  if (frames == 1) {
    out.row(0) = features.row(0);
    return out;
  }
  const double step = static_cast<double>(source - 1) / static_cast<double>(frames - 1);
  for (Index t = 0; t < frames; ++t) {
    const double pos = static_cast<double>(t) * step;
    const Index lo = std::min<Index>(static_cast<Index>(std::floor(pos)), source - 2);
    const double frac = pos - static_cast<double>(lo);
    out.row(t) = ((1.0 - frac) * features.row(lo).cast<double>() + frac * features.row(lo + 1).cast<double>())
                     .cast<float>();
  }
  out.row(frames - 1) = features.row(source - 1);
  return out;
}

MatrixX<float> interpolate_features(const MatrixX<float>& features, double src_rate, double dst_rate) {
  if (!(src_rate > 0.0) || !(dst_rate > 0.0)) throw Error("interpolation rates must be positive");
  if (features.rows() < 2) throw Error("interpolation needs at least 2 source frames");
  const auto frames = static_cast<Index>(std::llround(static_cast<double>(features.rows()) * dst_rate / src_rate));
  return interpolate_features(features, std::max<Index>(frames, 1));
}

}  // namespace artic::models
