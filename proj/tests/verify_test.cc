// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "s3mor/verify.h"

#include <gtest/gtest.h>

#include "s3mor/offline_oracle.h"

namespace s3mor {
namespace {

TEST(VerifySuites, FixturesPass) {
  const auto results = RunFixtureSuite();
  EXPECT_TRUE(AllPassed(results)) << FormatCheckLines(results);
  EXPECT_GE(results.size(), 15u);
}

TEST(VerifySuites, PropertiesPassAndAreDeterministic) {
  const auto a = RunPropertySuite(3, PropertyCounts{200, 50});
  const auto b = RunPropertySuite(3, PropertyCounts{200, 50});
  EXPECT_TRUE(AllPassed(a)) << FormatCheckLines(a);
  EXPECT_EQ(FormatVerifyJson("properties", 3, a),
            FormatVerifyJson("properties", 3, b));
}

TEST(VerifySuites, RatiosPassAndAreDeterministic) {
  const auto a = RunRatioSuite(7, RatioCounts{60});
  EXPECT_TRUE(AllPassed(a)) << FormatCheckLines(a);
  EXPECT_EQ(FormatCheckLines(a), FormatCheckLines(RunRatioSuite(7, {60})));
}

TEST(VerifySuites, UnknownSuiteRejected) {
  EXPECT_THROW(RunVerifySuite("bogus", 1), std::invalid_argument);
}

TEST(VerifySuites, FailingCheckFormatsAsFail) {
  const std::vector<CheckResult> results = {{"a", true, "ok"},
                                            {"b", false, "bad"}};
  EXPECT_FALSE(AllPassed(results));
  EXPECT_EQ(FormatCheckLines(results), "PASS a: ok\nFAIL b: bad\n");
}

TEST(TinyInstance, RespectsSizeLimits) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const TinyInstance tiny = MakeTinyInstance(seed);
    ASSERT_GE(tiny.stream.size(), 1u);
    ASSERT_LE(tiny.stream.size(), 8u);
    ASSERT_GE(tiny.k, 1);
    ASSERT_LE(tiny.k, 2);
    ASSERT_EQ(CountVisits(tiny.stream),
              static_cast<std::size_t>(tiny.n_visits));
    ASSERT_LE(tiny.n_visits, 3);
    ASSERT_GE(tiny.visit_bound, tiny.n_visits);
    ASSERT_LE(tiny.visit_bound, 5);
    ASSERT_GE(tiny.delta, 1);
    ASSERT_LE(tiny.delta, 3);
    ASSERT_LE(CountAssignments(tiny.stream, tiny.k), kMaxOptCombinations);
  }
}

}  // namespace
}  // namespace s3mor
