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

#ifndef ARTIC_CONTOUR_HPP_
#define ARTIC_CONTOUR_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "artic/types.hpp"

namespace artic {

// Per-utterance time series of vocal-tract air-tissue boundary points.
struct ContourSequence {
  std::string utterance_id;
  // [T x 2P]; columns are x0, y0, x1, y1, ... in pixel units.
  FrameMatrix frames;
  // One anatomical label per point.
  std::vector<std::string> segment_labels;
  // Index of each point in the full 170-point contour.
  std::vector<int> point_indices;
  double frame_rate = kFrameRate;

  Index num_frames() const { return frames.rows(); }
  Index num_points() const { return frames.cols() / 2; }
  Eigen::Vector2f point(Index t, Index p) const {
    return {frames(t, 2 * p), frames(t, 2 * p + 1)};
  }
};

// Checks point count, label count, finiteness and (optionally) the
// [0, 84] pixel bounds. Throws SchemaError naming the utterance and frame.
void validate_contours(const ContourSequence& contours, int expected_points = kContourPoints,
                       bool check_bounds = true);

// Anatomical label of each of the 170 contour points in the default layout.
const std::vector<std::string>& default_segment_labels();

// Builds a ContourSequence from a [T x 340] matrix.
ContourSequence make_contours(std::string utterance_id, FrameMatrix frames,
                              std::vector<std::string> labels = default_segment_labels());

ContourSequence read_contours(const std::filesystem::path& path, std::string utterance_id,
                              const std::vector<std::string>& labels = default_segment_labels());
void write_contours(const ContourSequence& contours, const std::filesystem::path& path);

enum class Split { kTrain, kVal, kTest };

std::string to_string(Split split);
Split parse_split(const std::string& name);

struct UtteranceRecord {
  std::string utterance_id;
  ContourSequence contours;
  std::filesystem::path original_wav_path;
  std::filesystem::path enhanced_wav_path;
  std::string transcript;
  std::optional<Split> split;
};

struct ManifestOptions {
  // Reject records whose waveform and contour durations differ by more than
  // this many seconds. Negative disables the check.
  double max_duration_mismatch_s = 0.05;
};

// Loads and validates a JSON manifest. Relative paths resolve against the
// manifest's directory. See docs/formats.md for the schema.
std::vector<UtteranceRecord> load_manifest(const std::filesystem::path& path,
                                           const ManifestOptions& options = {});

struct SplitRatios {
  double train = 0.85;
  double val = 0.05;
  double test = 0.10;
};

// Deterministic shuffle of the sorted utterance ids; floor(N * ratio) for
// train and val, remainder to test.
std::vector<UtteranceRecord> make_split(std::vector<UtteranceRecord> records,
                                        const SplitRatios& ratios, std::uint64_t seed);

struct SplitSizes {
  Index train = 0;
  Index val = 0;
  Index test = 0;
};
SplitSizes split_sizes(Index n, const SplitRatios& ratios);
SplitSizes count_splits(const std::vector<UtteranceRecord>& records);

}  // namespace artic

#endif  // ARTIC_CONTOUR_HPP_
