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

#ifndef ARTIC_SRC_CLI_RUN_CONFIG_HPP_
#define ARTIC_SRC_CLI_RUN_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "artic/contour.hpp"
#include "artic/eval/mcd.hpp"
#include "artic/features.hpp"
#include "artic/models/cbl.hpp"
#include "artic/models/discriminators.hpp"
#include "artic/models/hificar.hpp"
#include "artic/models/train.hpp"

namespace artic::cli {

// Which network and which representation it consumes or produces.
struct ModelSpec {
  std::string name;      // checkpoint directory label
  std::string family;    // "hificar" or "cbl"
  std::string input;     // hificar: mri | ema | mel | deep; cbl: mri
  std::string output;    // cbl: mel | deep; hificar: waveform
};

// Resolves a --model shortcut (hificar, ema, vocoder, deep-vocoder, cbl,
// cbl-deep). Throws ConfigError for anything else.
ModelSpec model_spec(const std::string& shortcut);

struct RunConfig {
  nlohmann::json doc;  // effective configuration after overrides
  std::filesystem::path base_dir;
  std::filesystem::path manifest;
  std::filesystem::path output_dir;
  std::optional<std::filesystem::path> feature_config;

  SplitRatios split;
  std::uint64_t split_seed = 0;
  ManifestOptions manifest_options;

  models::TrainConfig train;
  nlohmann::json model;          // {"preset", "generator", "discriminator", "cbl"}
  nlohmann::json deep_features;  // extractor spec
  int deep_dim = 32;
  nlohmann::json asr;
  eval::McdConfig mcd;

  int trials = 5;
  std::optional<std::string> device;

  std::uint64_t ablation_seed = 0;
  int n_subsets = 50;
  double keep_fraction = 0.9;

  FeatureConfig base_features() const;
  models::GeneratorConfig generator_config(int input_dim) const;
  models::DiscriminatorConfig discriminator_config() const;
  models::CblConfig cbl_config(int input_dim, int output_dim) const;
  int representation_dim(const std::string& representation) const;
  nlohmann::json seeds() const;
};

// Applies `key.path=value` overrides; values parse as JSON, else as strings.
void apply_override(nlohmann::json& doc, const std::string& assignment);

// Parses and validates everything up front so commands fail before writing.
RunConfig load_run_config(const std::filesystem::path& path, const std::vector<std::string>& overrides);

}  // namespace artic::cli

#endif  // ARTIC_SRC_CLI_RUN_CONFIG_HPP_
