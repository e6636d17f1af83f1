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

#include "cli/run_config.hpp"

#include <fstream>
#include <set>

#include "artic/errors.hpp"
#include "artic/types.hpp"

namespace artic::cli {

namespace fs = std::filesystem;
using nlohmann::json;

ModelSpec model_spec(const std::string& shortcut) {
  if (shortcut == "hificar") return {shortcut, "hificar", "mri", "waveform"};
  if (shortcut == "ema") return {shortcut, "hificar", "ema", "waveform"};
  if (shortcut == "vocoder") return {shortcut, "hificar", "mel", "waveform"};
  if (shortcut == "deep-vocoder") return {shortcut, "hificar", "deep", "waveform"};
  if (shortcut == "cbl") return {shortcut, "cbl", "mri", "mel"};
  if (shortcut == "cbl-deep") return {shortcut, "cbl", "mri", "deep"};
  throw ConfigError("unknown model '" + shortcut +
                    "' (expected hificar, ema, vocoder, deep-vocoder, cbl or cbl-deep)");
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override must look like key.path=value: " + assignment);
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("bad override key: " + key);
    if (!node->is_object()) *node = json::object();
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = std::move(value);
}

namespace {

const std::set<std::string> kTopLevelKeys = {"manifest", "output_dir",    "seed",       "feature_config",
                                             "split",    "preprocess",    "model",      "train",
                                             "deep_features", "evaluation", "benchmark", "ablation"};

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

json section(const json& doc, const char* key) {
  if (!doc.contains(key) || doc.at(key).is_null()) return json::object();
  if (!doc.at(key).is_object()) throw ConfigError(std::string("config section '") + key + "' must be an object");
  return doc.at(key);
}

json with_preset(json sub, const json& model) {
  if (!sub.is_object()) throw ConfigError("model sub-configs must be objects");
  if (!sub.contains("preset") && model.contains("preset")) sub["preset"] = model.at("preset");
  return sub;
}

}  // namespace

FeatureConfig RunConfig::base_features() const {
  return feature_config ? load_feature_config(*feature_config) : default_feature_config();
}

models::GeneratorConfig RunConfig::generator_config(int input_dim) const {
  json sub = with_preset(model.value("generator", json::object()), model);
  sub["input_dim"] = input_dim;
  return models::generator_config_from_json(sub);
}

models::DiscriminatorConfig RunConfig::discriminator_config() const {
  return models::discriminator_config_from_json(with_preset(model.value("discriminator", json::object()), model));
}

models::CblConfig RunConfig::cbl_config(int input_dim, int output_dim) const {
  json sub = with_preset(model.value("cbl", json::object()), model);
  sub["input_dim"] = input_dim;
  sub["output_dim"] = output_dim;
  return models::cbl_config_from_json(sub);
}

int RunConfig::representation_dim(const std::string& representation) const {
  if (representation == "mri") return kFeatureDim;
  if (representation == "ema") return kEmaDim;
  if (representation == "mel") return 80;
  if (representation == "deep") return deep_dim;
  throw ConfigError("unknown representation '" + representation + "'");
}

json RunConfig::seeds() const {
  return {{"split", split_seed}, {"train", train.seed}, {"ablation", ablation_seed}};
}

RunConfig load_run_config(const fs::path& path, const std::vector<std::string>& overrides) {
  RunConfig rc;
  std::ifstream in(path);
  if (!in) throw LoadError("cannot read config " + path.string());
  try {
    rc.doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  if (!rc.doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& o : overrides) apply_override(rc.doc, o);
  for (const auto& [key, value] : rc.doc.items()) {
    if (!kTopLevelKeys.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  rc.base_dir = fs::absolute(path).parent_path();

  try {
    const json& d = rc.doc;
    if (!d.contains("manifest")) throw ConfigError("config needs 'manifest'");
    if (!d.contains("output_dir")) throw ConfigError("config needs 'output_dir'");
    rc.manifest = resolve(rc.base_dir, d.at("manifest").get<std::string>());
    rc.output_dir = resolve(rc.base_dir, d.at("output_dir").get<std::string>());
    if (d.contains("feature_config") && !d.at("feature_config").is_null()) {
      rc.feature_config = resolve(rc.base_dir, d.at("feature_config").get<std::string>());
      if (!fs::exists(*rc.feature_config)) throw LoadError("feature config not found: " + rc.feature_config->string());
    }
    if (d.contains("seed") && !d.at("seed").is_number_integer()) throw ConfigError("'seed' must be an integer");
    const auto seed = d.value("seed", std::uint64_t{0});

    const json split = section(d, "split");
    rc.split.train = split.value("train", rc.split.train);
    rc.split.val = split.value("val", rc.split.val);
    rc.split.test = split.value("test", rc.split.test);
    rc.split_seed = split.value("seed", seed);
    split_sizes(0, rc.split);  // validates the ratios

    rc.manifest_options.max_duration_mismatch_s =
        section(d, "preprocess").value("max_duration_mismatch_s", rc.manifest_options.max_duration_mismatch_s);

    json train = section(d, "train");
    if (!train.contains("seed")) train["seed"] = seed;
    rc.train = models::train_config_from_json(train);

    rc.model = section(d, "model");
    rc.deep_features = section(d, "deep_features");
    if (!rc.deep_features.contains("type")) rc.deep_features["type"] = "stub";
    rc.deep_dim = rc.deep_features.value("dim", rc.deep_dim);
    if (rc.deep_dim < 1) throw ConfigError("deep_features.dim must be >= 1");

    const json evaluation = section(d, "evaluation");
    rc.asr = evaluation.value("asr", json{{"type", "stub"}, {"default", ""}});
    const json mcd = evaluation.value("mcd", json::object());
    rc.mcd.frame_length = mcd.value("frame_length", rc.mcd.frame_length);
    rc.mcd.fft_size = mcd.value("fft_size", rc.mcd.fft_size);
    rc.mcd.hop = mcd.value("hop", rc.mcd.hop);
    rc.mcd.order = mcd.value("order", rc.mcd.order);
    rc.mcd.alpha = mcd.value("alpha", rc.mcd.alpha);
    if (rc.mcd.frame_length < 1 || rc.mcd.fft_size < rc.mcd.frame_length || rc.mcd.hop < 1 || rc.mcd.order < 1) {
      throw ConfigError("bad evaluation.mcd settings");
    }

    const json bench = section(d, "benchmark");
    rc.trials = bench.value("trials", rc.trials);
    if (rc.trials < 1) throw ConfigError("benchmark.trials must be >= 1");
    if (bench.contains("device") && !bench.at("device").is_null()) rc.device = bench.at("device").get<std::string>();

    const json ablation = section(d, "ablation");
    rc.ablation_seed = ablation.value("seed", seed);
    rc.n_subsets = ablation.value("n_subsets", rc.n_subsets);
    rc.keep_fraction = ablation.value("keep_fraction", rc.keep_fraction);
    if (rc.n_subsets < 1) throw ConfigError("ablation.n_subsets must be >= 1");
    if (!(rc.keep_fraction > 0.0 && rc.keep_fraction <= 1.0)) throw ConfigError("ablation.keep_fraction must lie in (0, 1]");

    // Build every model config once so a bad value fails before any output.
    for (const char* rep : {"mri", "ema", "mel", "deep"}) rc.generator_config(rc.representation_dim(rep));
    rc.discriminator_config();
    rc.cbl_config(kFeatureDim, 80);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return rc;
}

}  // namespace artic::cli
