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

#include "cli/workspace.hpp"

#include <fstream>

#include "artic/errors.hpp"
#include "artic/mel.hpp"

namespace artic::cli {

namespace fs = std::filesystem;
using nlohmann::json;

void write_json(const json& doc, const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw LoadError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::vector<UtteranceInfo> SplitFile::subset(Split split) const {
  std::vector<UtteranceInfo> out;
  for (const auto& u : utterances) {
    if (u.split == split) out.push_back(u);
  }
  return out;
}

SplitFile load_split(const Workspace& ws) {
  if (!fs::exists(ws.split_file())) {
    throw LoadError("no preprocessed data under " + ws.preprocessed().string() + "; run 'artic preprocess' first");
  }
  SplitFile split;
  split.doc = read_json(ws.split_file());
  try {
    split.fingerprint = split.doc.at("fingerprint").get<std::string>();
    for (const auto& entry : split.doc.at("utterances")) {
      split.utterances.push_back({entry.at("id").get<std::string>(), parse_split(entry.at("split").get<std::string>()),
                                  entry.at("frames").get<Index>(), entry.at("transcript").get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw FormatError("bad split file: " + std::string(e.what()));
  }
  return split;
}

std::unique_ptr<models::DeepFeatureExtractor> make_deep_extractor(const json& spec) {
  const std::string type = spec.value("type", "stub");
  if (type == "stub") {
    return std::make_unique<models::StubDeepFeatureExtractor>(spec.value("dim", 32), spec.value("seed", std::uint64_t{0}));
  }
  if (type == "command") return std::make_unique<models::CommandDeepFeatureExtractor>(spec.value("command", ""));
  throw ConfigError("unknown deep feature extractor '" + type + "'");
}

FeatureSource::FeatureSource(const Workspace& ws, const RunConfig& config)
    : ws_(ws), deep_(make_deep_extractor(config.deep_features)) {}

Waveform FeatureSource::target(const UtteranceInfo& utt) const {
  return read_wav(ws_.target(utt.utterance_id), Provenance::kMixed);
}

Waveform FeatureSource::reference(const UtteranceInfo& utt) const {
  return read_wav(ws_.reference(utt.utterance_id), Provenance::kEnhanced);
}

MatrixX<float> FeatureSource::load(const std::string& representation, const UtteranceInfo& utt) {
  MatrixX<float> features;
  if (representation == "mri") {
    features = read_matrix(ws_.trajectory(utt.utterance_id), kFeatureDim);
  } else if (representation == "ema") {
    features = read_matrix(ws_.ema(utt.utterance_id), kEmaDim);
  } else if (representation == "mel") {
    features = log_mel(target(utt).samples).transpose();
  } else if (representation == "deep") {
    const models::DeepFeatures deep = deep_->extract(target(utt), utt.utterance_id);
    features = models::interpolate_features(deep.values, utt.frames);
  } else {
    throw ConfigError("unknown representation '" + representation + "'");
  }
  if (features.rows() != utt.frames) {
    throw ShapeError(utt.utterance_id + ": " + representation + " features have " + std::to_string(features.rows()) +
                     " frames, expected " + std::to_string(utt.frames));
  }
  return features;
}

std::vector<FeatureColumn> feature_columns(const FeatureConfig& config) {
  std::vector<FeatureColumn> columns;
  for (Index p : select_points(config.segment_labels, config.keep_labels)) {
    columns.push_back({static_cast<int>(p), 0});
    columns.push_back({static_cast<int>(p), 1});
  }
  return columns;
}

}  // namespace artic::cli
