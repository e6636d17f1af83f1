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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "artic/errors.hpp"
#include "artic/eval/cer.hpp"

namespace artic::eval {
namespace {

std::size_t brute_distance(const std::u32string& a, const std::u32string& b) {
  if (a.empty()) return b.size();
  if (b.empty()) return a.size();
  const std::u32string ta = a.substr(1), tb = b.substr(1);
  return std::min({brute_distance(ta, b) + 1, brute_distance(a, tb) + 1,
                   brute_distance(ta, tb) + (a[0] == b[0] ? 0 : 1)});
}

TEST(Cer, Examples) {
  EXPECT_DOUBLE_EQ(cer("abc", "axc"), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(cer("ab", ""), 1.0);
  EXPECT_DOUBLE_EQ(cer("the vocal tract", "the vocal tract"), 0.0);
  EXPECT_DOUBLE_EQ(cer("abc", "abcabc"), 1.0);
  EXPECT_DOUBLE_EQ(cer("kitten", "sitting"), 3.0 / 6.0);
}

TEST(Cer, Normalization) {
  EXPECT_EQ(normalize_text("  Hello,   World!\n"), "hello world");
  EXPECT_EQ(normalize_text("..."), "");
  EXPECT_DOUBLE_EQ(cer("Hello, world.", "hello world"), 0.0);
  EXPECT_THROW(cer("?!", "anything"), Error);
  EXPECT_THROW(cer("", "x"), Error);
}

TEST(Cer, CountsCodepointsNotBytes) {
  EXPECT_EQ(utf8_codepoints("na\xC3\xAFve").size(), 5u);
  EXPECT_EQ(utf8_codepoints("\xE6\x97\xA5\xE6\x9C\xAC").size(), 2u);
  EXPECT_DOUBLE_EQ(cer("na\xC3\xAFve", "naive"), 1.0 / 5.0);
  EXPECT_EQ(utf8_codepoints("a\xFF" "b"), (std::u32string{U'a', U'�', U'b'}));
}

TEST(EditDistance, MatchesBruteForce) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> len(0, 7);
  std::uniform_int_distribution<int> sym(0, 3);
  for (int trial = 0; trial < 400; ++trial) {
    std::u32string a, b;
    for (int i = len(rng); i > 0; --i) a += static_cast<char32_t>('a' + sym(rng));
    for (int i = len(rng); i > 0; --i) b += static_cast<char32_t>('a' + sym(rng));
    ASSERT_EQ(edit_distance(a, b), brute_distance(a, b)) << trial;
    ASSERT_EQ(edit_distance(a, b), edit_distance(b, a));
  }
}

TEST(CerResult, AggregatesAndNamesFailures) {
  const CerResult r = make_cer_result({"u1", "u2"}, {"ab", "abcd"}, {"ab", "abxd"});
  EXPECT_DOUBLE_EQ(r.summary.mean, 0.125);
  EXPECT_DOUBLE_EQ(r.summary.std, 0.125);
  EXPECT_EQ(r.to_json().at("per_utterance")[1].at("hypothesis"), "abxd");
  try {
    make_cer_result({"u1", "bad"}, {"ab", "!!"}, {"ab", "x"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("bad"), std::string::npos);
  }
}

}  // namespace
}  // namespace artic::eval
