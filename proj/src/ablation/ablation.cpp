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

#include "artic/ablation/ablation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

#include "artic/errors.hpp"
#include "artic/features.hpp"
#include "random.hpp"

namespace artic::ablation {

using nlohmann::json;

int keep_count(int n_features, double keep_fraction) {
  return static_cast<int>(std::llround(keep_fraction * n_features));
}

int SubsetPlan::subset_size() const { return keep_count(n_features, keep_fraction); }

json SubsetPlan::to_json() const {
  return {{"seed", seed},
          {"n_subsets", subsets.size()},
          {"n_features", n_features},
          {"keep_fraction", keep_fraction},
          {"subset_size", subset_size()},
          {"subsets", subsets}};
}

SubsetPlan SubsetPlan::from_json(const json& doc) {
  SubsetPlan plan;
  try {
    plan.seed = doc.at("seed").get<std::uint64_t>();
    plan.n_features = doc.at("n_features").get<int>();
    plan.keep_fraction = doc.at("keep_fraction").get<double>();
    plan.subsets = doc.at("subsets").get<std::vector<std::vector<int>>>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad subset plan: ") + e.what());
  }
  for (const auto& subset : plan.subsets) {
    for (int f : subset) {
      if (f < 0 || f >= plan.n_features) throw FormatError("subset plan index out of range");
    }
  }
  return plan;
}

SubsetPlan make_plan(std::uint64_t seed, int n_subsets, double keep_fraction, int n_features) {
  if (n_subsets < 0 || n_features < 1) throw ConfigError("subset plan sizes must be positive");
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) throw ConfigError("keep_fraction must lie in (0, 1]");
  SubsetPlan plan;
  plan.seed = seed;
  plan.n_features = n_features;
  plan.keep_fraction = keep_fraction;
  const int k = keep_count(n_features, keep_fraction);
  std::mt19937_64 rng(seed);
  std::vector<int> pool(static_cast<std::size_t>(n_features));
  for (int s = 0; s < n_subsets; ++s) {
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < k; ++i) {
      const auto j = static_cast<std::size_t>(i) +
                     internal::uniform_below(rng, static_cast<std::uint64_t>(n_features - i));
      std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    }
    std::vector<int> subset(pool.begin(), pool.begin() + k);
    std::sort(subset.begin(), subset.end());
    plan.subsets.push_back(std::move(subset));
  }
  return plan;
}

void save_plan(const SubsetPlan& plan, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw LoadError("cannot write " + path.string());
  out << plan.to_json().dump(2) << '\n';
}

SubsetPlan load_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot read " + path.string());
  try {
    return SubsetPlan::from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw FormatError("bad subset plan " + path.string() + ": " + e.what());
  }
}

std::vector<int> rank_scores(const std::vector<double>& scores) {
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return scores[a] < scores[b]; });
  std::vector<int> ranks(scores.size());
  for (std::size_t r = 0; r < order.size(); ++r) ranks[static_cast<std::size_t>(order[r])] = static_cast<int>(r) + 1;
  return ranks;
}

std::vector<double> fractional_ranks(const std::vector<double>& scores) {
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return scores[a] < scores[b]; });
  std::vector<double> ranks(scores.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[static_cast<std::size_t>(order[k])] = shared;
    i = j + 1;
  }
  return ranks;
}

FeatureImportanceReport aggregate_importance(const SubsetPlan& plan, const std::vector<double>& subset_mcd,
                                             const std::vector<bool>& failed) {
  if (subset_mcd.size() != plan.subsets.size() || failed.size() != plan.subsets.size()) {
    throw ShapeError("one MCD value and failure flag per subset expected");
  }
  const auto n = static_cast<std::size_t>(plan.n_features);
  FeatureImportanceReport report;
  report.subset_mcd = subset_mcd;
  report.failed = failed;
  report.failures.assign(plan.subsets.size(), "");
  std::vector<double> sums(n, 0.0);
  report.inclusion_counts.assign(n, 0);
  for (std::size_t s = 0; s < plan.subsets.size(); ++s) {
    if (failed[s]) {
      report.subset_mcd[s] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    for (int f : plan.subsets[s]) {
      sums[static_cast<std::size_t>(f)] += subset_mcd[s];
      ++report.inclusion_counts[static_cast<std::size_t>(f)];
    }
  }
  report.scores.resize(n);
  for (std::size_t f = 0; f < n; ++f) {
    report.scores[f] = report.inclusion_counts[f] > 0 ? sums[f] / report.inclusion_counts[f]
                                                      : std::numeric_limits<double>::infinity();
  }
  report.ranks = rank_scores(report.scores);
  return report;
}

FeatureImportanceReport run_ablation(const SubsetPlan& plan, const SubsetEvaluator& evaluate) {
  std::vector<double> values(plan.subsets.size(), 0.0);
  std::vector<bool> failed(plan.subsets.size(), false);
  std::vector<std::string> messages(plan.subsets.size());
  for (std::size_t s = 0; s < plan.subsets.size(); ++s) {
    try {
      values[s] = evaluate(plan.subsets[s]);
      if (!std::isfinite(values[s])) throw Error("non-finite MCD");
    } catch (const std::exception& e) {
      failed[s] = true;
      messages[s] = e.what();
    }
  }
  FeatureImportanceReport report = aggregate_importance(plan, values, failed);
  report.failures = std::move(messages);
  return report;
}

double masked_mean_mcd(models::Synthesizer& model, const std::vector<TestUtterance>& test_set,
                       const std::vector<int>& keep, const eval::McdConfig& config) {
  if (test_set.empty()) throw ConfigError("ablation test set is empty");
  double total = 0.0;
  for (const auto& utt : test_set) {
    const Waveform synthesized{model.synthesize(mask_columns(utt.features, keep)), kSampleRate,
                               Provenance::kSynthesized};
    total += eval::mcd(utt.reference, synthesized, config);
  }
  return total / static_cast<double>(test_set.size());
}

FeatureImportanceReport run_ablation(models::Synthesizer& model, const std::vector<TestUtterance>& test_set,
                                     const SubsetPlan& plan, const eval::McdConfig& config) {
  if (model.input_dim() != plan.n_features) throw ConfigError("plan feature count does not match the model input");
  return run_ablation(plan, [&](const std::vector<int>& keep) { return masked_mean_mcd(model, test_set, keep, config); });
}

bool FeatureImportanceReport::has_failures() const {
  return std::any_of(failed.begin(), failed.end(), [](bool f) { return f; });
}

json FeatureImportanceReport::to_json() const {
  const auto number = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json subsets = json::array();
  for (std::size_t s = 0; s < subset_mcd.size(); ++s) {
    json entry = {{"index", s}, {"mcd", number(subset_mcd[s])}, {"failed", static_cast<bool>(failed[s])}};
    if (failed[s]) entry["error"] = failures[s];
    subsets.push_back(entry);
  }
  json features = json::array();
  for (std::size_t f = 0; f < scores.size(); ++f) {
    features.push_back({{"feature", f},
                        {"score", number(scores[f])},
                        {"never_kept", !std::isfinite(scores[f])},
                        {"rank", ranks[f]},
                        {"inclusion_count", inclusion_counts[f]}});
  }
  return {{"subsets", subsets},
          {"features", features},
          {"num_failed", std::count(failed.begin(), failed.end(), true)},
          {"warning", has_failures()}};
}

namespace {

std::string winner(double mri, double ema) {
  if (mri == ema) return "tie";
  return mri < ema ? "mri" : "ema";
}

RepresentationMetrics score(const std::string& name, models::Synthesizer& model,
                            const std::vector<ComparisonUtterance>& test_set, bool ema, eval::AsrClient* asr,
                            const eval::McdConfig& config) {
  RepresentationMetrics metrics;
  metrics.name = name;
  std::vector<std::string> ids;
  std::vector<double> mcds;
  std::vector<std::string> refs;
  std::vector<std::string> hyps;
  for (const auto& utt : test_set) {
    const Waveform synthesized{model.synthesize(ema ? utt.ema_features : utt.mri_features), kSampleRate,
                               Provenance::kSynthesized};
    ids.push_back(utt.utterance_id);
    mcds.push_back(eval::mcd(utt.reference, synthesized, config));
    if (asr != nullptr) {
      refs.push_back(utt.transcript);
      hyps.push_back(eval::transcribe(synthesized, *asr, utt.utterance_id));
    }
  }
  metrics.mcd = eval::make_mcd_result(ids, mcds);
  if (asr != nullptr) metrics.cer = eval::make_cer_result(ids, refs, hyps);
  return metrics;
}

}  // namespace

EmaComparison compare_ema(models::Synthesizer& mri_model, models::Synthesizer& ema_model,
                          const std::vector<ComparisonUtterance>& test_set, const std::string& mri_split,
                          const std::string& ema_split, eval::AsrClient* asr, const eval::McdConfig& config) {
  if (mri_split != ema_split) throw ConfigError("MRI and EMA models were trained on different splits");
  if (test_set.empty()) throw ConfigError("comparison test set is empty");
  EmaComparison out;
  out.mri = score("mri", mri_model, test_set, false, asr, config);
  out.ema = score("ema", ema_model, test_set, true, asr, config);
  out.mcd_winner = winner(out.mri.mcd.summary.mean, out.ema.mcd.summary.mean);
  out.cer_winner = asr != nullptr ? winner(out.mri.cer->summary.mean, out.ema.cer->summary.mean) : "n/a";
  return out;
}

json EmaComparison::to_json() const {
  const auto block = [](const RepresentationMetrics& m) {
    json j = {{"name", m.name}, {"mcd", m.mcd.to_json()}};
    j["cer"] = m.cer ? m.cer->to_json() : json(nullptr);
    return j;
  };
  return {{"mri", block(mri)}, {"ema", block(ema)}, {"winner", {{"mcd", mcd_winner}, {"cer", cer_winner}}}};
}

}  // namespace artic::ablation
