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

#include "artic/eval/cer.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "artic/errors.hpp"

namespace artic::eval {

using nlohmann::json;

std::string normalize_text(const std::string& text) {
  std::string out;
  bool pending_space = false;
  for (unsigned char c : text) {
    if (c < 0x80 && std::ispunct(c)) continue;
    if (c < 0x80 && std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += static_cast<char>(c < 0x80 ? std::tolower(c) : c);
  }
  return out;
}

std::u32string utf8_codepoints(const std::string& text) {
  std::u32string out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    int extra = 0;
    char32_t cp = 0;
    if (lead < 0x80) {
      cp = lead;
    } else if ((lead & 0xE0) == 0xC0) {
      extra = 1;
      cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
      extra = 2;
      cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
      extra = 3;
      cp = lead & 0x07;
    } else {
      out += U'�';
      ++i;
      continue;
    }
    bool ok = true;
    for (int k = 1; ok && k <= extra; ++k) {
      if (i + k >= text.size()) {
        ok = false;
        break;
      }
      const auto next = static_cast<unsigned char>(text[i + k]);
      if ((next & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (next & 0x3F);
    }
    if (!ok) {
      out += U'�';
      ++i;
      continue;
    }
    out += cp;
    i += static_cast<std::size_t>(extra) + 1;
  }
  return out;
}

std::size_t edit_distance(const std::u32string& a, const std::u32string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({up + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

double cer(const std::string& reference, const std::string& hypothesis) {
  const std::u32string ref = utf8_codepoints(normalize_text(reference));
  if (ref.empty()) throw Error("cer: reference is empty after normalization");
  const std::u32string hyp = utf8_codepoints(normalize_text(hypothesis));
  return static_cast<double>(edit_distance(ref, hyp)) / static_cast<double>(ref.size());
}

json CerResult::to_json() const {
  json per = json::array();
  for (std::size_t i = 0; i < values.size(); ++i) {
    per.push_back({{"utterance_id", utterance_ids[i]},
                   {"reference", references[i]},
                   {"hypothesis", hypotheses[i]},
                   {"cer", values[i]}});
  }
  return {{"per_utterance", per},
          {"mean", summary.mean},
          {"std", summary.std},
          {"normalization", "lowercase ascii, strip ascii punctuation, collapse whitespace"}};
}

CerResult make_cer_result(std::vector<std::string> ids, std::vector<std::string> references,
                          std::vector<std::string> hypotheses) {
  CerResult r;
  for (std::size_t i = 0; i < references.size(); ++i) {
    try {
      r.values.push_back(cer(references[i], hypotheses[i]));
    } catch (const Error& e) {
      throw Error(ids[i] + ": " + e.what());
    }
  }
  r.summary = summarize(r.values);
  r.utterance_ids = std::move(ids);
  r.references = std::move(references);
  r.hypotheses = std::move(hypotheses);
  return r;
}

}  // namespace artic::eval
