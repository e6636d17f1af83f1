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

#ifndef ARTIC_SYNTHETIC_HPP_
#define ARTIC_SYNTHETIC_HPP_

#include <cstdint>
#include <filesystem>
#include <string>

#include "artic/audio.hpp"
#include "artic/contour.hpp"

namespace artic {

// Procedural stand-in corpus: a static vocal-tract outline with moving
// articulators and slow head drift, paired with a harmonic tone whose pitch
// follows the tongue and whose loudness follows the lips. The hard palate is
// rigid, so it is the least variable region after head motion.
struct SyntheticUtterance {
  ContourSequence contours;
  Waveform enhanced;  // clean, at `enhanced_rate`
  Waveform original;  // reverberant and noisy, at 20 kHz
  std::string transcript;
};

struct SyntheticCorpusOptions {
  int utterances = 10;
  double min_duration_s = 1.0;
  double max_duration_s = 2.0;
  int enhanced_rate = 48000;
  std::uint64_t seed = 0;
};

SyntheticUtterance make_synthetic_utterance(const std::string& utterance_id, Index frames, std::uint64_t seed,
                                            int enhanced_rate = 48000);

// Writes contours/, wav/ and manifest.json under `dir`; returns the manifest.
std::filesystem::path write_synthetic_corpus(const std::filesystem::path& dir,
                                             const SyntheticCorpusOptions& options = {});

}  // namespace artic

#endif  // ARTIC_SYNTHETIC_HPP_
