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

#ifndef ARTIC_FEATURES_HPP_
#define ARTIC_FEATURES_HPP_

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "artic/contour.hpp"
#include "artic/trajectory.hpp"
#include "artic/types.hpp"

namespace artic {

// Centering anchor fitted on the full 170-point training contours.
struct CenterSpec {
  int point_index = 0;
  // [P x 2]: (sigma_x, sigma_y) of every point over all training frames.
  MatrixX<double> point_std;
};

enum class EmaLocation { kUpperLip, kLowerLip, kLowerIncisor, kTongueTip, kTongueBody, kTongueDorsum };

inline constexpr std::array<EmaLocation, kEmaLocations> kEmaOrder = {
    EmaLocation::kUpperLip,  EmaLocation::kLowerLip,   EmaLocation::kLowerIncisor,
    EmaLocation::kTongueTip, EmaLocation::kTongueBody, EmaLocation::kTongueDorsum};

std::string to_string(EmaLocation location);
EmaLocation parse_ema_location(const std::string& name);

using EmaPointMap = std::map<EmaLocation, int>;

struct EmaEstimate {
  std::string utterance_id;
  FrameMatrix data;  // [T x 12] in kEmaOrder, (x, y) per location
  EmaPointMap point_map;
};

// Labels, retained segments, EMA point map and (after fitting) the center.
struct FeatureConfig {
  std::vector<std::string> segment_labels;
  std::set<std::string> keep_labels;
  EmaPointMap ema_point_map;
  std::optional<CenterSpec> center;
};

FeatureConfig default_feature_config();
FeatureConfig load_feature_config(const std::filesystem::path& path);
void save_feature_config(const FeatureConfig& config, const std::filesystem::path& path);

// Points (in input order) whose label is in keep_labels. Throws ConfigError
// unless exactly 115 points are selected.
std::vector<Index> select_points(const std::vector<std::string>& labels,
                                 const std::set<std::string>& keep_labels);

ContourSequence prune(const ContourSequence& contours, const std::set<std::string>& keep_labels);

// Throws StatisticsError with fewer than 2 frames in total.
CenterSpec fit_center(const std::vector<ContourSequence>& train_contours);

// Per-frame position [T x 2] of the center point, from the 170-point input.
FrameMatrix center_track(const ContourSequence& full_contours, const CenterSpec& spec);

// out(t, p) = in(t, p) - center(t), flattened to [T x 2P].
ArticulatoryTrajectory center_and_flatten(const ContourSequence& pruned,
                                          const Eigen::Ref<const FrameMatrix>& center,
                                          const CenterSpec& spec);

// prune + center_and_flatten from a full 170-point sequence.
ArticulatoryTrajectory make_trajectory(const ContourSequence& full_contours,
                                       const FeatureConfig& config);

EmaEstimate estimate_ema(const ArticulatoryTrajectory& traj, const EmaPointMap& point_map);

ArticulatoryTrajectory mask_features(const ArticulatoryTrajectory& traj,
                                     const std::vector<int>& keep);
FrameMatrix mask_columns(const FrameMatrix& data, const std::vector<int>& keep);

// Mean uncentered position [P x 2] of the retained points over the given
// contours; used as the backdrop of the importance map.
MatrixX<double> mean_point_positions(const std::vector<ContourSequence>& contours);

}  // namespace artic

#endif  // ARTIC_FEATURES_HPP_
