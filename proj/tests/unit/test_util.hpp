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

#ifndef ARTIC_TESTS_TEST_UTIL_HPP_
#define ARTIC_TESTS_TEST_UTIL_HPP_

#include <unistd.h>

#include <filesystem>
#include <random>
#include <string>

#include "artic/contour.hpp"

namespace artic::testing {

// Per-test scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "t") {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("artic_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline ContourSequence random_contours(const std::string& id, Index frames, std::mt19937_64& rng) {
  std::uniform_real_distribution<float> coord(10.0f, 74.0f);
  FrameMatrix data(frames, 2 * kContourPoints);
  for (Index i = 0; i < data.size(); ++i) data.data()[i] = coord(rng);
  return make_contours(id, data);
}

}  // namespace artic::testing

#endif  // ARTIC_TESTS_TEST_UTIL_HPP_
