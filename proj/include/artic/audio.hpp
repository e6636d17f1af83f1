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

#ifndef ARTIC_AUDIO_HPP_
#define ARTIC_AUDIO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "artic/trajectory.hpp"
#include "artic/types.hpp"

namespace artic {

enum class Provenance { kOriginal, kEnhanced, kMixed, kSynthesized };

std::string to_string(Provenance provenance);

struct Waveform {
  Eigen::VectorXf samples;
  int sample_rate = kSampleRate;
  Provenance provenance = Provenance::kOriginal;

  Index size() const { return samples.size(); }
  double duration() const { return static_cast<double>(samples.size()) / sample_rate; }
};

struct WavInfo {
  int sample_rate = 0;
  int channels = 0;
  int bits_per_sample = 0;
  Index num_frames = 0;
};

// PCM16 mono WAV. read_wav also accepts 32-bit float; multi-channel input is
// rejected with FormatError.
WavInfo read_wav_info(const std::filesystem::path& path);
Waveform read_wav(const std::filesystem::path& path, Provenance provenance = Provenance::kOriginal);
void write_wav(const Waveform& wav, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_wav(const Waveform& wav);
Waveform decode_wav(const std::vector<std::uint8_t>& bytes,
                    Provenance provenance = Provenance::kOriginal);

// Band-limited (Kaiser-windowed sinc) resampling. Output length is
// round(N * target_rate / sample_rate); identical rates return a copy.
Waveform resample(const Waveform& wav, int target_rate);

// 0.9 * enhanced + 0.1 * original. Throws AlignmentError on length or rate
// mismatch.
Waveform mix_targets(const Waveform& enhanced, const Waveform& original);

inline constexpr double kEnhancedWeight = 0.9;
inline constexpr double kOriginalWeight = 0.1;

// Trims both at the tail so that len(wav) == T' * samples_per_frame with
// T' = min(T, floor(len / samples_per_frame)).
std::pair<ArticulatoryTrajectory, Waveform> reconcile_lengths(ArticulatoryTrajectory traj,
                                                               Waveform wav,
                                                               int samples_per_frame = kSamplesPerFrame);

}  // namespace artic

#endif  // ARTIC_AUDIO_HPP_
