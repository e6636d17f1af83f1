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

#ifndef ARTIC_EVAL_CER_HPP_
#define ARTIC_EVAL_CER_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "artic/eval/summary.hpp"

namespace artic::eval {

// Lowercases ASCII letters, removes ASCII punctuation, collapses runs of
// whitespace to one space and trims both ends. Non-ASCII text passes through.
std::string normalize_text(const std::string& text);

// Decodes UTF-8 to code points; invalid bytes map to U+FFFD.
std::u32string utf8_codepoints(const std::string& text);

std::size_t edit_distance(const std::u32string& a, const std::u32string& b);

// Levenshtein distance over code points of the normalized texts divided by
// the normalized reference length. Throws Error when the reference is empty.
double cer(const std::string& reference, const std::string& hypothesis);

struct CerResult {
  std::vector<std::string> utterance_ids;
  std::vector<std::string> references;
  std::vector<std::string> hypotheses;
  std::vector<double> values;
  MeanStd summary;

  nlohmann::json to_json() const;
};

CerResult make_cer_result(std::vector<std::string> ids, std::vector<std::string> references,
                          std::vector<std::string> hypotheses);

}  // namespace artic::eval

#endif  // ARTIC_EVAL_CER_HPP_
