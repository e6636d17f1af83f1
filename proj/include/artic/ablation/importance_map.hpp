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

#ifndef ARTIC_ABLATION_IMPORTANCE_MAP_HPP_
#define ARTIC_ABLATION_IMPORTANCE_MAP_HPP_

#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "artic/ablation/ablation.hpp"
#include "artic/trajectory.hpp"
#include "artic/types.hpp"

namespace artic::ablation {

// Where each retained point sits in image coordinates (pixels, y down).
struct ReferenceFrame {
  std::vector<int> point_indices;
  MatrixX<double> positions;  // [P x 2]

  nlohmann::json to_json() const;
  static ReferenceFrame from_json(const nlohmann::json& doc);
};

struct ImportanceMapOptions {
  int scale = 6;  // output pixels per MRI pixel
  int radius = 4;
};

// CSV (point, axis, score, rank), one row per feature.
void write_importance_csv(const FeatureImportanceReport& report, const std::vector<FeatureColumn>& feature_index_map,
                          const std::filesystem::path& path);

// RGB image of the points at their reference positions. A point's shade
// follows the better tie-averaged rank of its two coordinates; darker green
// is more important.
void render_importance_map(const FeatureImportanceReport& report,
                           const std::vector<FeatureColumn>& feature_index_map, const ReferenceFrame& frame,
                           const std::filesystem::path& png_path, const ImportanceMapOptions& options = {});

// Shade in [0, 1] per point of `frame` (0 = darkest); exposed for tests.
std::vector<double> point_shades(const FeatureImportanceReport& report,
                                 const std::vector<FeatureColumn>& feature_index_map, const ReferenceFrame& frame);

}  // namespace artic::ablation

#endif  // ARTIC_ABLATION_IMPORTANCE_MAP_HPP_
