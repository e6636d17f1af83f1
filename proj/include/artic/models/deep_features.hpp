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

#ifndef ARTIC_MODELS_DEEP_FEATURES_HPP_
#define ARTIC_MODELS_DEEP_FEATURES_HPP_

#include <cstdint>
#include <string>

#include "artic/audio.hpp"
#include "artic/types.hpp"

namespace artic::models {

// [T' x D'] frames at `rate` frames per second.
struct DeepFeatures {
  MatrixX<float> values;
  double rate = 0.0;
};

class DeepFeatureExtractor {
 public:
  virtual ~DeepFeatureExtractor() = default;
  virtual std::string name() const = 0;
  virtual DeepFeatures extract(const Waveform& wav, const std::string& utterance_id) = 0;
};

// Deterministic stand-in: a seeded random projection of the log mel
// spectrogram, at the mel frame rate (20000 / 240 Hz).
class StubDeepFeatureExtractor : public DeepFeatureExtractor {
 public:
  explicit StubDeepFeatureExtractor(int dim = 32, std::uint64_t seed = 0);
  std::string name() const override { return "stub"; }
  DeepFeatures extract(const Waveform& wav, const std::string& utterance_id) override;

 private:
  MatrixX<float> projection_;  // [80 x dim]
};

// Wraps an external program. `command` is a template where {wav} and {out}
// are replaced by a temporary 20 kHz PCM16 WAV and the output path. The
// program writes an ARTJ matrix [T' x D'] to {out} and prints its frame rate
// (Hz) on stdout.
class CommandDeepFeatureExtractor : public DeepFeatureExtractor {
 public:
  explicit CommandDeepFeatureExtractor(std::string command);
  std::string name() const override { return "command"; }
  DeepFeatures extract(const Waveform& wav, const std::string& utterance_id) override;

 private:
  std::string command_;
};

// Linear interpolation along time with both endpoints pinned. The output has
// round(T' * dst_rate / src_rate) frames unless `frames` is given.
// Throws Error when T' < 2.
MatrixX<float> interpolate_features(const MatrixX<float>& features, double src_rate, double dst_rate);
MatrixX<float> interpolate_features(const MatrixX<float>& features, Index frames);

}  // namespace artic::models

#endif  // ARTIC_MODELS_DEEP_FEATURES_HPP_
