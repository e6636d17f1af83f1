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

#include "artic/eval/benchmark.hpp"

#include <chrono>
#include <cstdlib>

#include "artic/errors.hpp"
#include "artic/eval/summary.hpp"

namespace artic::eval {

using nlohmann::json;

json TimingResult::to_json() const {
  return {{"trial_means_s", trial_means},
          {"trials", trial_means.size()},
          {"mean_s", mean},
          {"std_s", std},
          {"device", device},
          {"parameter_count", parameter_count},
          {"num_utterances", num_utterances}};
}

std::string resolve_device(const std::optional<std::string>& requested) {
  std::string device = "cpu";
  if (requested && !requested->empty()) {
    device = *requested;
  } else if (const char* env = std::getenv(kDeviceEnv); env != nullptr && *env != '\0') {
    device = env;
  }
  if (device == "cpu") return device;
  if (device == "gpu" || device == "cuda" || device.rfind("cuda:", 0) == 0) {
    throw EnvironmentError("device '" + device + "' is unavailable: this build has only a CPU backend");
  }
  throw ConfigError("unknown device '" + device + "'");
}

TimingResult benchmark_inference(models::Synthesizer& model, const std::vector<MatrixX<float>>& test_set,
                                 const std::string& device, int trials) {
  if (trials < 1) throw ConfigError("benchmark needs at least one trial");
  if (test_set.empty()) throw ConfigError("benchmark test set is empty");
  TimingResult result;
  result.device = resolve_device(device);
  result.parameter_count = model.parameter_count();
  result.num_utterances = test_set.size();

  volatile float sink = 0.0f;
  sink = sink + model.synthesize(test_set.front()).sum();

  using Clock = std::chrono::steady_clock;
  for (int trial = 0; trial < trials; ++trial) {
    double total = 0.0;
    for (const auto& features : test_set) {
      const auto start = Clock::now();
      const Eigen::VectorXf out = model.synthesize(features);
      total += std::chrono::duration<double>(Clock::now() - start).count();
      sink = sink + (out.size() > 0 ? out(0) : 0.0f);
    }
    result.trial_means.push_back(total / static_cast<double>(test_set.size()));
  }
  const MeanStd s = summarize(result.trial_means);
  result.mean = s.mean;
  result.std = s.std;
  return result;
}

}  // namespace artic::eval
