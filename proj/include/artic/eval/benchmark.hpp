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

#ifndef ARTIC_EVAL_BENCHMARK_HPP_
#define ARTIC_EVAL_BENCHMARK_HPP_

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "artic/models/synthesizer.hpp"
#include "artic/types.hpp"

namespace artic::eval {

inline constexpr int kDefaultTrials = 5;
inline constexpr const char* kDeviceEnv = "ARTIC_DEVICE";

struct TimingResult {
  std::vector<double> trial_means;  // seconds per utterance, one per trial
  double mean = 0.0;
  double std = 0.0;
  std::string device;
  std::size_t parameter_count = 0;
  std::size_t num_utterances = 0;

  nlohmann::json to_json() const;
};

// Picks the device from `requested`, else $ARTIC_DEVICE, else "cpu". Only
// the CPU backend exists; "gpu"/"cuda" raise EnvironmentError and anything
// else ConfigError.
std::string resolve_device(const std::optional<std::string>& requested = std::nullopt);

// One untimed warm-up synthesis, then `trials` passes over the whole test set.
// Each trial records the mean wall-clock seconds per utterance. The caller
// loads the model beforehand, so loading never enters the measurement.
// Run it serially on an otherwise idle machine.
TimingResult benchmark_inference(models::Synthesizer& model, const std::vector<MatrixX<float>>& test_set,
                                 const std::string& device, int trials = kDefaultTrials);

}  // namespace artic::eval

#endif  // ARTIC_EVAL_BENCHMARK_HPP_
