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

#ifndef ARTIC_EVAL_MCD_HPP_
#define ARTIC_EVAL_MCD_HPP_

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "artic/audio.hpp"
#include "artic/eval/summary.hpp"
#include "artic/types.hpp"

namespace artic::eval {

// Mel-cepstral analysis settings. The cepstrum of the log amplitude spectrum
// is frequency-warped to `order` coefficients with all-pass constant `alpha`.
struct McdConfig {
  int frame_length = 512;
  int fft_size = 1024;
  int hop = 100;
  int order = 13;
  double alpha = 0.42;
  double log_floor = 1e-10;
};

nlohmann::json to_json(const McdConfig& config);

// 10 * sqrt(2) / ln(10)
inline constexpr double kMcdScale = 6.141851463713754;

// Warps cepstrum `c` (any length) to order + 1 coefficients.
VectorX<double> freqt(const Eigen::Ref<const VectorX<double>>& c, int order, double alpha);

// [frames x (order + 1)] mel-cepstra of a waveform; c0 is column 0.
MatrixX<double> mel_cepstrum(const Eigen::Ref<const Eigen::VectorXf>& samples, const McdConfig& config = {});

// Minimum-cost monotone path through `cost` using (1,0), (0,1), (1,1) steps,
// from (0, 0) to (rows - 1, cols - 1). Backtracking prefers the diagonal.
std::vector<std::pair<Index, Index>> dtw_path(const MatrixX<double>& cost);

// MCD between two cepstral sequences, c0 (column 0) excluded.
double mcd_from_cepstra(const MatrixX<double>& reference, const MatrixX<double>& synthesized);

// Throws Error on empty input or mismatched sample rates.
double mcd(const Waveform& reference, const Waveform& synthesized, const McdConfig& config = {});

struct McdResult {
  std::vector<std::string> utterance_ids;
  std::vector<double> values;
  MeanStd summary;

  nlohmann::json to_json() const;
};

McdResult make_mcd_result(std::vector<std::string> ids, std::vector<double> values);

}  // namespace artic::eval

#endif  // ARTIC_EVAL_MCD_HPP_
