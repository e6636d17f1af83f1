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

#ifndef ARTIC_SRC_CLI_WORKSPACE_HPP_
#define ARTIC_SRC_CLI_WORKSPACE_HPP_

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "artic/audio.hpp"
#include "artic/contour.hpp"
#include "artic/features.hpp"
#include "artic/models/deep_features.hpp"
#include "artic/trajectory.hpp"
#include "cli/run_config.hpp"

namespace artic::cli {

// Fixed output layout under the run's output directory:
//   preprocessed/{traj,ema,targets,reference}/<id>.{artj,wav}
//   preprocessed/{features,split,reference_frame,preprocess_report}.json
//   checkpoints/<model>/{step_NNNNNNN,latest}.artc
//   synth/<model>/<id>.wav
//   reports/
class Workspace {
 public:
  explicit Workspace(std::filesystem::path root) : root_(std::move(root)) {}

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path preprocessed() const { return root_ / "preprocessed"; }
  std::filesystem::path trajectory(const std::string& id) const { return preprocessed() / "traj" / (id + ".artj"); }
  std::filesystem::path ema(const std::string& id) const { return preprocessed() / "ema" / (id + ".artj"); }
  std::filesystem::path target(const std::string& id) const { return preprocessed() / "targets" / (id + ".wav"); }
  std::filesystem::path reference(const std::string& id) const {
    return preprocessed() / "reference" / (id + ".wav");
  }
  std::filesystem::path features_file() const { return preprocessed() / "features.json"; }
  std::filesystem::path split_file() const { return preprocessed() / "split.json"; }
  std::filesystem::path reference_frame_file() const { return preprocessed() / "reference_frame.json"; }
  std::filesystem::path checkpoints(const std::string& model) const { return root_ / "checkpoints" / model; }
  std::filesystem::path latest_checkpoint(const std::string& model) const {
    return checkpoints(model) / "latest.artc";
  }
  std::filesystem::path synth(const std::string& model) const { return root_ / "synth" / model; }
  std::filesystem::path reports() const { return root_ / "reports"; }

 private:
  std::filesystem::path root_;
};

struct UtteranceInfo {
  std::string utterance_id;
  Split split = Split::kTrain;
  Index frames = 0;
  std::string transcript;
};

// Contents of split.json.
struct SplitFile {
  std::vector<UtteranceInfo> utterances;  // sorted by id
  std::string fingerprint;
  nlohmann::json doc;

  std::vector<UtteranceInfo> subset(Split split) const;
};

SplitFile load_split(const Workspace& ws);

// Time-major features of one representation for a preprocessed utterance,
// always exactly `frames` rows.
class FeatureSource {
 public:
  FeatureSource(const Workspace& ws, const RunConfig& config);
  MatrixX<float> load(const std::string& representation, const UtteranceInfo& utt);
  Waveform target(const UtteranceInfo& utt) const;
  Waveform reference(const UtteranceInfo& utt) const;

 private:
  const Workspace& ws_;
  std::unique_ptr<models::DeepFeatureExtractor> deep_;
};

std::unique_ptr<models::DeepFeatureExtractor> make_deep_extractor(const nlohmann::json& spec);

// Column layout of the retained features, rebuilt from the feature config.
std::vector<FeatureColumn> feature_columns(const FeatureConfig& config);

void write_json(const nlohmann::json& doc, const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace artic::cli

#endif  // ARTIC_SRC_CLI_WORKSPACE_HPP_
