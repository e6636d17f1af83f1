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

#include "artic/eval/summary.hpp"

#include <cmath>

namespace artic::eval {

MeanStd summarize(const std::vector<double>& values) {
  MeanStd s;
  if (values.empty()) return s;
  const auto n = static_cast<double>(values.size());
  for (double v : values) s.mean += v;
  s.mean /= n;
  double var = 0.0;
  for (double v : values) var += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(var / n);
  return s;
}

}  // namespace artic::eval
