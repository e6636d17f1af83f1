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

#ifndef ARTIC_TRAJECTORY_HPP_
#define ARTIC_TRAJECTORY_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "artic/types.hpp"

namespace artic {

struct FeatureColumn {
  int point_index = 0;  // index in the full 170-point contour
  int axis = 0;         // 0 = x, 1 = y
  friend bool operator==(const FeatureColumn&, const FeatureColumn&) = default;
};

// Model-ready articulatory features, [T x D] with D = 230 for MRI input.
struct ArticulatoryTrajectory {
  std::string utterance_id;
  FrameMatrix data;
  double feature_rate = kFrameRate;
  std::vector<FeatureColumn> feature_index_map;

  Index num_frames() const { return data.rows(); }
  Index dim() const { return data.cols(); }
};

// Binary matrix file: "ARTJ", u32 version = 1, u32 T, u32 D, then T*D
// little-endian float32 values in row-major order.
inline constexpr char kTrajectoryMagic[4] = {'A', 'R', 'T', 'J'};
inline constexpr std::uint32_t kTrajectoryVersion = 1;

void write_matrix(const FrameMatrix& data, const std::filesystem::path& path);
// Throws LoadError if missing, FormatError on a bad header, truncated payload
// or a column count different from expected_dim.
FrameMatrix read_matrix(const std::filesystem::path& path,
                        std::optional<Index> expected_dim = std::nullopt);

void write_trajectory(const ArticulatoryTrajectory& traj, const std::filesystem::path& path);
ArticulatoryTrajectory read_trajectory(const std::filesystem::path& path,
                                       std::optional<Index> expected_dim = std::nullopt);

}  // namespace artic

#endif  // ARTIC_TRAJECTORY_HPP_
