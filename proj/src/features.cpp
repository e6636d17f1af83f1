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

#include "artic/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "artic/errors.hpp"

namespace artic {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(EmaLocation location) {
  switch (location) {
    case EmaLocation::kUpperLip: return "upper_lip";
    case EmaLocation::kLowerLip: return "lower_lip";
    case EmaLocation::kLowerIncisor: return "lower_incisor";
    case EmaLocation::kTongueTip: return "tongue_tip";
    case EmaLocation::kTongueBody: return "tongue_body";
    case EmaLocation::kTongueDorsum: return "tongue_dorsum";
  }
  return "";
}

EmaLocation parse_ema_location(const std::string& name) {
  for (EmaLocation loc : kEmaOrder) {
    if (to_string(loc) == name) return loc;
  }
  throw ConfigError("unknown EMA location '" + name + "'");
}

FeatureConfig default_feature_config() {
  FeatureConfig config;
  config.segment_labels = default_segment_labels();
  config.keep_labels = {"lower_lip", "lower_incisor",   "tongue", "epiglottis", "larynx",
                        "velum",     "pharyngeal_wall", "hard_palate", "upper_lip"};
  // Approximate picks matching the EMA coil placements.
  config.ema_point_map = {{EmaLocation::kUpperLip, 164},  {EmaLocation::kLowerLip, 25},
                          {EmaLocation::kLowerIncisor, 32}, {EmaLocation::kTongueTip, 38},
                          {EmaLocation::kTongueBody, 50},   {EmaLocation::kTongueDorsum, 62}};
  return config;
}

FeatureConfig load_feature_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open feature config: " + path.string());
  FeatureConfig config;
  try {
    const json doc = json::parse(in);
    config.segment_labels = doc.at("segment_labels").get<std::vector<std::string>>();
    const auto keep = doc.at("keep_labels").get<std::vector<std::string>>();
    config.keep_labels = {keep.begin(), keep.end()};
    for (const auto& [name, index] : doc.at("ema_point_map").items()) {
      config.ema_point_map[parse_ema_location(name)] = index.get<int>();
    }
    if (doc.contains("center") && !doc.at("center").is_null()) {
      const json& c = doc.at("center");
      CenterSpec spec;
      spec.point_index = c.at("point_index").get<int>();
      const auto stds = c.at("point_std").get<std::vector<std::array<double, 2>>>();
      spec.point_std.resize(static_cast<Index>(stds.size()), 2);
      for (std::size_t i = 0; i < stds.size(); ++i) {
        spec.point_std(static_cast<Index>(i), 0) = stds[i][0];
        spec.point_std(static_cast<Index>(i), 1) = stds[i][1];
      }
      config.center = spec;
    }
  } catch (const json::exception& e) {
    throw ConfigError("feature config " + path.string() + ": " + e.what());
  }
  return config;
}

void save_feature_config(const FeatureConfig& config, const fs::path& path) {
  json doc;
  doc["segment_labels"] = config.segment_labels;
  doc["keep_labels"] = std::vector<std::string>(config.keep_labels.begin(), config.keep_labels.end());
  json ema = json::object();
  for (const auto& [loc, index] : config.ema_point_map) ema[to_string(loc)] = index;
  doc["ema_point_map"] = ema;
  if (config.center) {
    json stds = json::array();
    for (Index i = 0; i < config.center->point_std.rows(); ++i) {
      stds.push_back({config.center->point_std(i, 0), config.center->point_std(i, 1)});
    }
    doc["center"] = {{"point_index", config.center->point_index}, {"point_std", stds}};
  } else {
    doc["center"] = nullptr;
  }
  std::ofstream out(path);
  if (!out) throw LoadError("cannot write feature config: " + path.string());
  out << doc.dump(2) << "\n";
}

std::vector<Index> select_points(const std::vector<std::string>& labels,
                                 const std::set<std::string>& keep_labels) {
  std::vector<Index> selected;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (keep_labels.count(labels[i])) selected.push_back(static_cast<Index>(i));
  }
  if (selected.size() != kRetainedPoints) {
    throw ConfigError("keep_labels select " + std::to_string(selected.size()) +
                      " points; exactly " + std::to_string(kRetainedPoints) + " are required");
  }
  return selected;
}

ContourSequence prune(const ContourSequence& contours, const std::set<std::string>& keep_labels) {
  const std::vector<Index> selected = select_points(contours.segment_labels, keep_labels);
  ContourSequence out;
  out.utterance_id = contours.utterance_id;
  out.frame_rate = contours.frame_rate;
  out.frames.resize(contours.num_frames(), 2 * static_cast<Index>(selected.size()));
  for (std::size_t j = 0; j < selected.size(); ++j) {
    const Index p = selected[j];
    out.frames.middleCols(2 * static_cast<Index>(j), 2) = contours.frames.middleCols(2 * p, 2);
    out.segment_labels.push_back(contours.segment_labels[static_cast<std::size_t>(p)]);
    out.point_indices.push_back(contours.point_indices.empty()
                                    ? static_cast<int>(p)
                                    : contours.point_indices[static_cast<std::size_t>(p)]);
  }
  return out;
}

CenterSpec fit_center(const std::vector<ContourSequence>& train_contours) {
  if (train_contours.empty()) throw StatisticsError("fit_center needs at least 2 frames");
  const Index cols = train_contours.front().frames.cols();
  // Accumulate in utterance-id order so the result does not depend on input order.
  std::vector<const ContourSequence*> ordered;
  Index total = 0;
  for (const auto& seq : train_contours) {
    if (seq.frames.cols() != cols) throw ShapeError("fit_center: inconsistent point counts");
    ordered.push_back(&seq);
    total += seq.num_frames();
  }
  if (total < 2) throw StatisticsError("fit_center needs at least 2 frames, got " + std::to_string(total));
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
    return a->utterance_id < b->utterance_id;
  });

  Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(cols);
  for (const auto* seq : ordered) mean += seq->frames.cast<double>().colwise().sum();
  mean /= static_cast<double>(total);
  Eigen::RowVectorXd sq = Eigen::RowVectorXd::Zero(cols);
  for (const auto* seq : ordered) {
    sq += (seq->frames.cast<double>().rowwise() - mean).array().square().matrix().colwise().sum();
  }
  const Eigen::RowVectorXd var = sq / static_cast<double>(total);

  CenterSpec spec;
  const Index points = cols / 2;
  spec.point_std.resize(points, 2);
  double best = std::numeric_limits<double>::infinity();
  for (Index p = 0; p < points; ++p) {
    spec.point_std(p, 0) = std::sqrt(var(2 * p));
    spec.point_std(p, 1) = std::sqrt(var(2 * p + 1));
    const double combined = std::sqrt(var(2 * p) + var(2 * p + 1));
    if (combined < best) {
      best = combined;
      spec.point_index = static_cast<int>(p);
    }
  }
  return spec;
}

FrameMatrix center_track(const ContourSequence& full_contours, const CenterSpec& spec) {
  if (spec.point_index < 0 || spec.point_index >= full_contours.num_points()) {
    throw ShapeError("center point " + std::to_string(spec.point_index) + " not in contour");
  }
  return full_contours.frames.middleCols(2 * spec.point_index, 2);
}

ArticulatoryTrajectory center_and_flatten(const ContourSequence& pruned,
                                          const Eigen::Ref<const FrameMatrix>& center,
                                          const CenterSpec& /*spec*/) {
  if (center.rows() != pruned.num_frames() || center.cols() != 2) {
    throw ShapeError("center track must be [T x 2]");
  }
  ArticulatoryTrajectory traj;
  traj.utterance_id = pruned.utterance_id;
  traj.feature_rate = pruned.frame_rate;
  traj.data.resize(pruned.num_frames(), pruned.frames.cols());
  for (Index p = 0; p < pruned.num_points(); ++p) {
    traj.data.middleCols(2 * p, 2) = pruned.frames.middleCols(2 * p, 2) - center;
  }
  for (Index p = 0; p < pruned.num_points(); ++p) {
    const int index = pruned.point_indices.empty() ? static_cast<int>(p)
                                                   : pruned.point_indices[static_cast<std::size_t>(p)];
    traj.feature_index_map.push_back({index, 0});
    traj.feature_index_map.push_back({index, 1});
  }
  return traj;
}

ArticulatoryTrajectory make_trajectory(const ContourSequence& full_contours,
                                       const FeatureConfig& config) {
  if (!config.center) throw ConfigError("feature config has no fitted center");
  const FrameMatrix center = center_track(full_contours, *config.center);
  return center_and_flatten(prune(full_contours, config.keep_labels), center, *config.center);
}

EmaEstimate estimate_ema(const ArticulatoryTrajectory& traj, const EmaPointMap& point_map) {
  EmaEstimate est;
  est.utterance_id = traj.utterance_id;
  est.point_map = point_map;
  est.data.resize(traj.num_frames(), kEmaDim);
  for (std::size_t k = 0; k < kEmaOrder.size(); ++k) {
    const auto it = point_map.find(kEmaOrder[k]);
    if (it == point_map.end()) {
      throw ConfigError("EMA point map does not cover '" + to_string(kEmaOrder[k]) + "'");
    }
    for (int axis = 0; axis < 2; ++axis) {
      const auto col = std::find(traj.feature_index_map.begin(), traj.feature_index_map.end(),
                                 FeatureColumn{it->second, axis});
      if (col == traj.feature_index_map.end()) {
        throw ConfigError("EMA point " + std::to_string(it->second) + " for '" +
                          to_string(kEmaOrder[k]) + "' is not a retained point");
      }
      est.data.col(2 * static_cast<Index>(k) + axis) =
          traj.data.col(std::distance(traj.feature_index_map.begin(), col));
    }
  }
  return est;
}

FrameMatrix mask_columns(const FrameMatrix& data, const std::vector<int>& keep) {
  std::vector<char> kept(static_cast<std::size_t>(data.cols()), 0);
  for (int k : keep) {
    if (k < 0 || k >= data.cols()) {
      throw ShapeError("mask index " + std::to_string(k) + " outside [0, " +
                       std::to_string(data.cols()) + ")");
    }
    kept[static_cast<std::size_t>(k)] = 1;
  }
  FrameMatrix out = data;
  for (Index c = 0; c < data.cols(); ++c) {
    if (!kept[static_cast<std::size_t>(c)]) out.col(c).setZero();
  }
  return out;
}

ArticulatoryTrajectory mask_features(const ArticulatoryTrajectory& traj, const std::vector<int>& keep) {
  ArticulatoryTrajectory out = traj;
  out.data = mask_columns(traj.data, keep);
  return out;
}

MatrixX<double> mean_point_positions(const std::vector<ContourSequence>& contours) {
  if (contours.empty()) throw StatisticsError("mean_point_positions: no contours");
  const Index cols = contours.front().frames.cols();
  Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(cols);
  Index total = 0;
  for (const auto& seq : contours) {
    sum += seq.frames.cast<double>().colwise().sum();
    total += seq.num_frames();
  }
  if (total == 0) throw StatisticsError("mean_point_positions: no frames");
  sum /= static_cast<double>(total);
  return Eigen::Map<const MatrixX<double>>(sum.data(), cols / 2, 2);
}

}  // namespace artic
