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

#ifndef ARTIC_SRC_PROCESS_HPP_
#define ARTIC_SRC_PROCESS_HPP_

#include <filesystem>
#include <string>

namespace artic::internal {

struct ProcessResult {
  int exit_code = -1;
  std::string output;  // captured stdout
};

// Runs `command` through /bin/sh and captures stdout.
ProcessResult run_capture(const std::string& command);

// Single-quotes `text` for /bin/sh.
std::string shell_quote(const std::string& text);

// Replaces every occurrence of `key` in `text`.
std::string replace_all(std::string text, const std::string& key, const std::string& value);

// Creates a fresh private directory under the system temp path; removed on
// destruction.
class ScratchDir {
 public:
  ScratchDir();
  ~ScratchDir();
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace artic::internal

#endif  // ARTIC_SRC_PROCESS_HPP_
