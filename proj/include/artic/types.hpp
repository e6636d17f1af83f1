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

#ifndef ARTIC_TYPES_HPP_
#define ARTIC_TYPES_HPP_

#include <Eigen/Core>

namespace artic {

// Time-major dense matrices: one row per frame.
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using FrameMatrix = MatrixX<float>;
using Index = Eigen::Index;

inline constexpr int kContourPoints = 170;
inline constexpr int kRetainedPoints = 115;
inline constexpr int kFeatureDim = 2 * kRetainedPoints;
inline constexpr int kEmaLocations = 6;
inline constexpr int kEmaDim = 2 * kEmaLocations;
inline constexpr double kFrameRate = 83.0;
inline constexpr double kGridSize = 84.0;
inline constexpr double kPixelSpacingMm = 2.4;
inline constexpr int kSampleRate = 20000;
inline constexpr int kSamplesPerFrame = 240;

}  // namespace artic

#endif  // ARTIC_TYPES_HPP_
