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

#ifndef ARTIC_EVAL_SUMMARY_HPP_
#define ARTIC_EVAL_SUMMARY_HPP_

#include <vector>

#include <nlohmann/json.hpp>

namespace artic::eval {

// Mean and population standard deviation; both zero for an empty list.
struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd summarize(const std::vector<double>& values);

inline nlohmann::json to_json(const MeanStd& s) { return {{"mean", s.mean}, {"std", s.std}}; }

}  // namespace artic::eval

#endif  // ARTIC_EVAL_SUMMARY_HPP_
