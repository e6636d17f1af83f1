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

#ifndef ARTIC_ABLATION_ABLATION_HPP_
#define ARTIC_ABLATION_ABLATION_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "artic/audio.hpp"
#include "artic/eval/asr.hpp"
#include "artic/eval/cer.hpp"
#include "artic/eval/mcd.hpp"
#include "artic/models/synthesizer.hpp"
#include "artic/types.hpp"

namespace artic::ablation {

inline constexpr int kDefaultSubsets = 50;
inline constexpr double kDefaultKeepFraction = 0.9;

// Random feature subsets to keep; everything else is masked to 0.0.
struct SubsetPlan {
  std::uint64_t seed = 0;
  int n_features = kFeatureDim;
  double keep_fraction = kDefaultKeepFraction;
  std::vector<std::vector<int>> subsets;  // each sorted ascending

  int subset_size() const;
  nlohmann::json to_json() const;
  static SubsetPlan from_json(const nlohmann::json& doc);
};

// round(keep_fraction * n_features); 207 for the defaults.
int keep_count(int n_features, double keep_fraction);

// Each subset is an independent uniform draw of keep_count indices from one
// seeded stream, so the plan depends on the seed alone.
SubsetPlan make_plan(std::uint64_t seed, int n_subsets = kDefaultSubsets,
                     double keep_fraction = kDefaultKeepFraction, int n_features = kFeatureDim);

void save_plan(const SubsetPlan& plan, const std::filesystem::path& path);
SubsetPlan load_plan(const std::filesystem::path& path);

struct FeatureImportanceReport {
  std::vector<double> subset_mcd;  // NaN where failed
  std::vector<bool> failed;
  std::vector<std::string> failures;  // message per failed subset, "" otherwise
  std::vector<double> scores;         // +inf for features kept by no scored subset
  std::vector<int> ranks;             // permutation of 1..n, 1 = lowest score
  std::vector<int> inclusion_counts;  // over scored (non-failed) subsets

  bool has_failures() const;
  nlohmann::json to_json() const;
};

// Ascending score with ties broken by lower index; +inf sorts last.
std::vector<int> rank_scores(const std::vector<double>& scores);

// Ranks averaged over ties (1-based), for color scales.
std::vector<double> fractional_ranks(const std::vector<double>& scores);

FeatureImportanceReport aggregate_importance(const SubsetPlan& plan, const std::vector<double>& subset_mcd,
                                             const std::vector<bool>& failed);

// `evaluate(keep)` returns the mean MCD for one subset; an exception marks
// that subset failed.
using SubsetEvaluator = std::function<double(const std::vector<int>& keep)>;
FeatureImportanceReport run_ablation(const SubsetPlan& plan, const SubsetEvaluator& evaluate);

struct TestUtterance {
  std::string utterance_id;
  MatrixX<float> features;  // [T x 230], centered
  Waveform reference;
  std::string transcript;
};

// Masks, synthesizes free-running and scores each test utterance.
double masked_mean_mcd(models::Synthesizer& model, const std::vector<TestUtterance>& test_set,
                       const std::vector<int>& keep, const eval::McdConfig& config = {});

FeatureImportanceReport run_ablation(models::Synthesizer& model, const std::vector<TestUtterance>& test_set,
                                     const SubsetPlan& plan, const eval::McdConfig& config = {});

struct RepresentationMetrics {
  std::string name;
  eval::McdResult mcd;
  std::optional<eval::CerResult> cer;
};

struct EmaComparison {
  RepresentationMetrics mri;
  RepresentationMetrics ema;
  std::string mcd_winner;  // "mri", "ema" or "tie"
  std::string cer_winner;  // also "n/a" without an ASR client

  nlohmann::json to_json() const;
};

struct ComparisonUtterance {
  std::string utterance_id;
  MatrixX<float> mri_features;  // [T x 230]
  MatrixX<float> ema_features;  // [T x 12]
  Waveform reference;
  std::string transcript;
};

// Both models must come from the same split; `mri_split` and `ema_split` are
// split fingerprints recorded at training time (ConfigError if they differ).
EmaComparison compare_ema(models::Synthesizer& mri_model, models::Synthesizer& ema_model,
                          const std::vector<ComparisonUtterance>& test_set, const std::string& mri_split,
                          const std::string& ema_split, eval::AsrClient* asr, const eval::McdConfig& config = {});

}  // namespace artic::ablation

#endif  // ARTIC_ABLATION_ABLATION_HPP_
