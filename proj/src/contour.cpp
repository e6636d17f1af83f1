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

#include "artic/contour.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <utility>

#include <nlohmann/json.hpp>

#include "artic/audio.hpp"
#include "artic/errors.hpp"
#include "artic/features.hpp"
#include "artic/trajectory.hpp"
#include "random.hpp"

namespace artic {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string>& default_segment_labels() {
  // Ordered along the traced boundary, from the chin around to the upper lip.
  static const std::vector<std::string> labels = [] {
    const std::vector<std::pair<std::string, int>> segments = {
        {"chin", 20},        {"lower_lip", 10},       {"lower_incisor", 5}, {"tongue", 40},
        {"epiglottis", 5},   {"larynx", 5},           {"subglottal", 10},   {"pharyngeal_wall", 10},
        {"velum", 15},       {"nasal_cavity", 25},    {"hard_palate", 15},  {"upper_lip", 10}};
    std::vector<std::string> out;
    for (const auto& [name, count] : segments) out.insert(out.end(), count, name);
    return out;
  }();
  return labels;
}

void validate_contours(const ContourSequence& contours, int expected_points, bool check_bounds) {
  const std::string& id = contours.utterance_id;
  if (contours.frames.cols() != 2 * expected_points) {
    throw SchemaError("utterance '" + id + "' frame 0: expected " + std::to_string(expected_points) +
                      " points, got " + std::to_string(contours.frames.cols() / 2));
  }
  if (contours.num_frames() < 1) throw SchemaError("utterance '" + id + "' has no frames");
  if (static_cast<Index>(contours.segment_labels.size()) != expected_points) {
    throw SchemaError("utterance '" + id + "' has " +
                      std::to_string(contours.segment_labels.size()) + " segment labels, expected " +
                      std::to_string(expected_points));
  }
  for (Index t = 0; t < contours.num_frames(); ++t) {
    for (Index c = 0; c < contours.frames.cols(); ++c) {
      const float v = contours.frames(t, c);
      if (!std::isfinite(v)) {
        throw SchemaError("utterance '" + id + "' frame " + std::to_string(t) +
                          ": non-finite coordinate");
      }
      if (check_bounds && (v < 0.0f || v > kGridSize)) {
        throw SchemaError("utterance '" + id + "' frame " + std::to_string(t) +
                          ": coordinate outside [0, 84]");
      }
    }
  }
}

ContourSequence make_contours(std::string utterance_id, FrameMatrix frames,
                              std::vector<std::string> labels) {
  ContourSequence seq;
  seq.utterance_id = std::move(utterance_id);
  seq.frames = std::move(frames);
  seq.segment_labels = std::move(labels);
  seq.point_indices.resize(seq.segment_labels.size());
  for (std::size_t i = 0; i < seq.point_indices.size(); ++i) seq.point_indices[i] = static_cast<int>(i);
  return seq;
}

ContourSequence read_contours(const fs::path& path, std::string utterance_id,
                              const std::vector<std::string>& labels) {
  FrameMatrix frames = read_matrix(path);
  if (frames.cols() % 2 != 0) {
    throw SchemaError("utterance '" + utterance_id + "' frame 0: odd coordinate count");
  }
  return make_contours(std::move(utterance_id), std::move(frames), labels);
}

void write_contours(const ContourSequence& contours, const fs::path& path) {
  write_matrix(contours.frames, path);
}

std::string to_string(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "train";
}

Split parse_split(const std::string& name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  throw SchemaError("unknown split '" + name + "'");
}

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

fs::path require_file(const fs::path& path) {
  if (!fs::exists(path)) throw LoadError("missing file: " + path.string());
  return path;
}

std::vector<std::string> manifest_labels(const json& doc, const fs::path& base) {
  if (!doc.contains("segment_labels")) return default_segment_labels();
  const json& node = doc.at("segment_labels");
  if (node.is_string()) {
    return load_feature_config(require_file(resolve(base, node.get<std::string>()))).segment_labels;
  }
  return node.get<std::vector<std::string>>();
}

}  // namespace

std::vector<UtteranceRecord> load_manifest(const fs::path& path, const ManifestOptions& options) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open manifest: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaError("manifest " + path.string() + " does not parse: " + e.what());
  }
  const fs::path base = path.parent_path();
  std::vector<UtteranceRecord> records;
  if (!doc.contains("utterances")) return records;

  const std::vector<std::string> labels = manifest_labels(doc, base);
  std::set<std::string> seen;
  for (const json& entry : doc.at("utterances")) {
    UtteranceRecord rec;
    try {
      rec.utterance_id = entry.at("id").get<std::string>();
      rec.transcript = entry.value("transcript", std::string());
      rec.original_wav_path = require_file(resolve(base, entry.at("original_wav").get<std::string>()));
      rec.enhanced_wav_path = require_file(resolve(base, entry.at("enhanced_wav").get<std::string>()));
      const fs::path contour_path = require_file(resolve(base, entry.at("contours").get<std::string>()));
      rec.contours = read_contours(contour_path, rec.utterance_id, labels);
      if (entry.contains("split")) rec.split = parse_split(entry.at("split").get<std::string>());
    } catch (const json::exception& e) {
      throw SchemaError("manifest entry " + std::to_string(records.size()) + ": " + e.what());
    }
    if (!seen.insert(rec.utterance_id).second) {
      throw SchemaError("duplicate utterance id '" + rec.utterance_id + "'");
    }
    validate_contours(rec.contours);

    if (options.max_duration_mismatch_s >= 0.0) {
      const double contour_s = rec.contours.num_frames() / rec.contours.frame_rate;
      for (const fs::path& wav : {rec.original_wav_path, rec.enhanced_wav_path}) {
        const WavInfo info = read_wav_info(wav);
        const double wav_s = static_cast<double>(info.num_frames) / info.sample_rate;
        if (std::abs(wav_s - contour_s) > options.max_duration_mismatch_s) {
          throw SchemaError("utterance '" + rec.utterance_id + "': audio " + wav.string() +
                            " lasts " + std::to_string(wav_s) + " s but contours last " +
                            std::to_string(contour_s) + " s");
        }
      }
    }
    records.push_back(std::move(rec));
  }
  return records;
}

SplitSizes split_sizes(Index n, const SplitRatios& ratios) {
  if (ratios.train < 0 || ratios.val < 0 || ratios.test < 0 ||
      std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9) {
    throw ConfigError("split ratios must be non-negative and sum to 1");
  }
  // The epsilon keeps products like 0.85 * 20 = 16.999... from flooring down.
  SplitSizes sizes;
  sizes.train = static_cast<Index>(std::floor(n * ratios.train + 1e-9));
  sizes.val = static_cast<Index>(std::floor(n * ratios.val + 1e-9));
  sizes.val = std::min(sizes.val, n - sizes.train);
  sizes.test = n - sizes.train - sizes.val;
  if (ratios.test == 0.0) {
    sizes.train += sizes.test;
    sizes.test = 0;
  }
  return sizes;
}

std::vector<UtteranceRecord> make_split(std::vector<UtteranceRecord> records,
                                        const SplitRatios& ratios, std::uint64_t seed) {
  const SplitSizes sizes = split_sizes(static_cast<Index>(records.size()), ratios);
  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return records[a].utterance_id < records[b].utterance_id;
  });
  std::mt19937_64 rng(seed);
  internal::shuffle(order, rng);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Index pos = static_cast<Index>(k);
    Split s = Split::kTest;
    if (pos < sizes.train) {
      s = Split::kTrain;
    } else if (pos < sizes.train + sizes.val) {
      s = Split::kVal;
    }
    records[order[k]].split = s;
  }
  return records;
}

SplitSizes count_splits(const std::vector<UtteranceRecord>& records) {
  SplitSizes sizes;
  for (const auto& r : records) {
    if (!r.split) continue;
    switch (*r.split) {
      case Split::kTrain: ++sizes.train; break;
      case Split::kVal: ++sizes.val; break;
      case Split::kTest: ++sizes.test; break;
    }
  }
  return sizes;
}

}  // namespace artic
