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

#include "s3mor/storm.h"

#include <gtest/gtest.h>

#include "s3mor/random.h"
#include "s3mor/verify.h"
#include "test_util.h"

namespace s3mor {
namespace {

using testing::Drive;
using testing::Event;
using testing::Ids;
using testing::NaiveCoverage;
using testing::NaiveOutputsCoverage;

std::vector<std::string> SetIds(const Storm& storm, int j) {
  std::vector<std::string> ids;
  for (const CandidateSlot& slot : storm.candidate_sets()[j]) {
    ids.push_back(slot.copy.item->id);
  }
  return ids;
}

std::vector<ItemCopy> AllCandidateCopies(const Storm& storm) {
  std::vector<ItemCopy> copies;
  for (const auto& set : storm.candidate_sets()) {
    for (const CandidateSlot& slot : set) copies.push_back(slot.copy);
  }
  return copies;
}

Stream RandomStream(std::uint64_t seed, std::size_t n, std::size_t visits) {
  Rng rng(seed);
  std::vector<ItemRef> items;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<TopicId> topics;
    const auto count = rng.UniformInt(4);
    for (std::uint64_t t = 0; t < count; ++t) {
      topics.push_back(static_cast<TopicId>(rng.UniformInt(12)));
    }
    const double p = rng.Bernoulli(0.2) ? 1.0 : rng.UniformDouble();
    items.push_back(MakeItemRef(std::to_string(i), topics, p));
  }
  return BuildStream(items, MakeVisitSchedule(n, visits, seed + 1));
}

TEST(StormNew, SingleEmptySet) {
  Storm storm(1, 1);
  ASSERT_EQ(storm.candidate_sets().size(), 1u);
  EXPECT_TRUE(storm.candidate_sets()[0].empty());
  EXPECT_EQ(storm.active(), (std::vector<int>{0}));
  EXPECT_EQ(storm.stored_copies(), 0u);
}

TEST(StormNew, RejectsNonPositiveParameters) {
  EXPECT_THROW(Storm(0, 1), std::invalid_argument);
  EXPECT_THROW(Storm(1, 0), std::invalid_argument);
}

TEST(StormStep, WorkedExampleTrace) {
  const Stream s = FixtureStream("appendix-c3");
  Storm storm(3, 1);

  // V1 seeds every empty set; only the first copy has positive nu.
  EXPECT_FALSE(storm.Step(s[0]).has_value());
  for (int j = 0; j < 3; ++j) {
    EXPECT_EQ(SetIds(storm, j), (std::vector<std::string>{"V1"}));
  }
  EXPECT_EQ(storm.candidate_sets()[0][0].nu, 1.0);
  EXPECT_EQ(storm.candidate_sets()[1][0].nu, 0.0);
  EXPECT_EQ(storm.candidate_sets()[2][0].nu, 0.0);

  // V2: 1 < 2 * 1 keeps A1; it evicts the nu = 0 copies of A2 and A3 (the
  // second with gain 0 >= 2 * 0).
  storm.Step(s[1]);
  EXPECT_EQ(SetIds(storm, 0), (std::vector<std::string>{"V1"}));
  EXPECT_EQ(SetIds(storm, 1), (std::vector<std::string>{"V2"}));
  EXPECT_EQ(SetIds(storm, 2), (std::vector<std::string>{"V2"}));
  EXPECT_EQ(storm.candidate_sets()[1][0].nu, 1.0);
  EXPECT_EQ(storm.candidate_sets()[2][0].nu, 0.0);

  // V3 arrives with a visit: only A3 (nu = 0) admits it.
  const auto first = storm.Step(s[2]);
  EXPECT_EQ(SetIds(storm, 0), (std::vector<std::string>{"V1"}));
  EXPECT_EQ(SetIds(storm, 1), (std::vector<std::string>{"V2"}));
  EXPECT_EQ(SetIds(storm, 2), (std::vector<std::string>{"V3"}));
  EXPECT_EQ(storm.candidate_sets()[0][0].nu, 1.0);
  EXPECT_EQ(storm.candidate_sets()[1][0].nu, 1.0);
  EXPECT_NEAR(storm.candidate_sets()[2][0].nu, 1.8, 1e-12);
  ASSERT_TRUE(first.has_value());
  EXPECT_EQ(Ids(*first), (std::vector<std::string>{"V3"}));
  EXPECT_NEAR(first->gain_at_emission(), 1.8, 1e-12);
  EXPECT_EQ(first->visit_index(), 0u);
  EXPECT_EQ(storm.active(), (std::vector<int>{0, 1}));

  // V4 (gain 2 over a union that holds V1, V2, V3) swaps into A1.
  const auto second = storm.Step(s[3]);
  ASSERT_TRUE(second.has_value());
  EXPECT_EQ(Ids(*second), (std::vector<std::string>{"V4"}));
  EXPECT_NEAR(second->gain_at_emission(), 2.0, 1e-12);
  EXPECT_EQ(storm.active(), (std::vector<int>{1}));
  EXPECT_NEAR(storm.output_state().Value(), 3.8, 1e-12);
  EXPECT_FALSE(storm.exhausted());
}

TEST(StormStep, WorkedExampleTotals) {
  const Stream s = FixtureStream("appendix-c3");
  Storm three(3, 1);
  const auto out3 = Drive(three, s);
  ASSERT_EQ(out3.size(), 2u);
  EXPECT_NEAR(out3[0].gain_at_emission(), 1.8, 1e-12);
  EXPECT_NEAR(out3[1].gain_at_emission(), 2.0, 1e-12);
  EXPECT_NEAR(NaiveOutputsCoverage(out3), 3.8, 1e-12);

  Storm two(2, 1);
  const auto out2 = Drive(two, s);
  EXPECT_EQ(Ids(out2[0]), (std::vector<std::string>{"V1"}));
  EXPECT_NEAR(NaiveOutputsCoverage(out2), 3.0, 1e-12);
}

TEST(StormStep, OracleCallAccountingOnWorkedExample) {
  // 3 inserts; then 2 full sets x (one nu consulted + one gain) for V2 and
  // V3 each; 3 set gains; 2 x 2 for V4; 2 set gains.
  Storm storm(3, 1);
  Drive(storm, FixtureStream("appendix-c3"));
  EXPECT_EQ(storm.oracle_calls(), 3u + 6u + 6u + 3u + 4u + 2u);
}

TEST(StormStep, TightnessInstances) {
  for (int tprime : {2, 3, 5}) {
    Storm storm(tprime, 1);
    std::size_t peak = 0;
    std::vector<OutputSet> outputs;
    for (const StreamEvent& e : FixtureStream("storm-tight", tprime)) {
      if (auto out = storm.Step(e)) outputs.push_back(*out);
      peak = std::max(peak, storm.stored_copies());
    }
    ASSERT_EQ(outputs.size(), 1u);
    EXPECT_NEAR(NaiveOutputsCoverage(outputs), 1.0, 1e-12) << tprime;
    EXPECT_LE(peak, static_cast<std::size_t>(tprime));
  }
}

TEST(StormStep, DuplicateCertainItemRecordsZeroNu) {
  Storm storm(1, 2);
  storm.Step(Event("a", {1}, 1.0, false));
  storm.Step(Event("a", {1}, 1.0, false));
  const auto& set = storm.candidate_sets()[0];
  ASSERT_EQ(set.size(), 2u);
  EXPECT_EQ(set[0].nu, 1.0);
  EXPECT_EQ(set[1].nu, 0.0);
  EXPECT_NE(set[0].copy.copy_tag, set[1].copy.copy_tag);
}

TEST(StormStep, EvictsEarliestAmongEqualNu) {
  Storm storm(1, 2);
  storm.Step(Event("a", {1}, 1.0, false));  // nu 1
  storm.Step(Event("b", {2}, 1.0, false));  // nu 1
  storm.Step(Event("c", {3, 4}, 1.0, false));  // gain 2 >= 2 * 1
  EXPECT_EQ(SetIds(storm, 0), (std::vector<std::string>{"c", "b"}));
}

TEST(StormStep, SwapThresholdIsInclusive) {
  Storm storm(1, 1);
  storm.Step(Event("a", {1}, 0.5, false));       // nu 0.5
  storm.Step(Event("b", {2}, 0.999, false));     // 0.999 < 1.0
  EXPECT_EQ(SetIds(storm, 0), (std::vector<std::string>{"a"}));
  storm.Step(Event("c", {3}, 1.0, false));       // 1.0 >= 1.0
  EXPECT_EQ(SetIds(storm, 0), (std::vector<std::string>{"c"}));
}

TEST(StormStep, ExhaustionEmitsEmptySet) {
  Storm storm(1, 1);
  auto first = storm.Step(Event("a", {1}, 1.0, true));
  ASSERT_TRUE(first.has_value());
  EXPECT_FALSE(storm.exhausted());
  auto second = storm.Step(Event("b", {2}, 1.0, true));
  ASSERT_TRUE(second.has_value());
  EXPECT_TRUE(second->items().empty());
  EXPECT_EQ(second->gain_at_emission(), 0.0);
  EXPECT_TRUE(storm.exhausted());
}

TEST(StormProperty, InvariantsOnRandomStreams) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int k = 1 + static_cast<int>(seed % 3);
    const int tprime = 3 + static_cast<int>(seed % 4);
    const Stream stream = RandomStream(seed, 40, 3);
    Storm storm(tprime, k);
    std::vector<OutputSet> outputs;
    std::size_t peak = 0;
    CoverageState shown;
    for (const StreamEvent& event : stream) {
      const auto before = storm.candidate_sets();
      auto out = storm.Step(event);
      peak = std::max(peak, storm.stored_copies());
      // nu-monotone eviction and per-set feasibility.
      for (int j = 0; j < tprime; ++j) {
        const auto& now = storm.candidate_sets()[j];
        ASSERT_LE(static_cast<int>(now.size()), k);
        if (before[j].size() != now.size()) continue;
        for (std::size_t s = 0; s < now.size(); ++s) {
          if (now[s].order != before[j][s].order) {
            ASSERT_GE(now[s].nu, 2.0 * before[j][s].nu);
          }
        }
      }
      ASSERT_EQ(event.visit, out.has_value());
      if (out) {
        ASSERT_LE(static_cast<int>(out->items().size()), k);
        const double expected = NaiveCoverage(
            [&] {
              std::vector<ItemCopy> all;
              for (const auto& o : outputs) {
                all.insert(all.end(), o.items().begin(), o.items().end());
              }
              all.insert(all.end(), out->items().begin(), out->items().end());
              return all;
            }()) - NaiveOutputsCoverage(outputs);
        ASSERT_NEAR(out->gain_at_emission(), expected, 1e-9);
        outputs.push_back(*out);
      }
      ASSERT_EQ(storm.active().size(),
                static_cast<std::size_t>(tprime) - outputs.size());
      const double reference =
          RecomputeFromScratch(AllCandidateCopies(storm)).Value();
      ASSERT_PRED2(testing::NearRel, storm.union_state().Value(), reference);
    }
    EXPECT_LE(peak, static_cast<std::size_t>(tprime * k));
    // Frozen sets equal what was shown; outputs are snapshots.
    std::vector<int> frozen;
    for (int j = 0; j < tprime; ++j) {
      if (std::find(storm.active().begin(), storm.active().end(), j) ==
          storm.active().end()) {
        frozen.push_back(j);
      }
    }
    ASSERT_EQ(frozen.size(), outputs.size());
  }
}

TEST(StormProperty, SkipSamplingIsSeedDeterministic) {
  const Stream stream = RandomStream(3, 60, 3);
  auto run = [&](std::uint64_t seed) {
    Storm storm(4, 2, SkipSampling{true, 2.0 / 3.0, seed});
    std::vector<std::vector<std::string>> ids;
    for (const auto& out : Drive(storm, stream)) ids.push_back(Ids(out));
    return std::make_pair(ids, storm.oracle_calls());
  };
  EXPECT_EQ(run(1), run(1));
  Storm exact(4, 2);
  Drive(exact, stream);
  EXPECT_LT(run(1).second, exact.oracle_calls());
}

TEST(GuessSet, Examples) {
  EXPECT_EQ(GuessSet(3, 3), (std::vector<int>{3}));
  EXPECT_EQ(GuessSet(7, 3), (std::vector<int>{3, 6, 9}));
  EXPECT_EQ(GuessSet(5, 1), (std::vector<int>{1, 2, 3, 4, 5}));
  EXPECT_THROW(GuessSet(5, 0), std::invalid_argument);
  EXPECT_THROW(GuessSet(0, 1), std::invalid_argument);
}

TEST(StormPlusPlus, OneInnerStormPerGuess) {
  StormPlusPlus pp(7, 2, 3);
  ASSERT_EQ(pp.guesses(), (std::vector<int>{3, 6, 9}));
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(pp.inner(i).visit_bound(), pp.guesses()[i]);
    EXPECT_EQ(pp.inner(i).k(), 2);
  }
}

TEST(StormPlusPlus, WorkedExampleMatchesStorm) {
  StormPlusPlus pp(3, 1, 3);
  EXPECT_NEAR(NaiveOutputsCoverage(Drive(pp, FixtureStream("appendix-c3"))),
              3.8, 1e-12);
}

TEST(StormPlusPlus, SingleGuessReproducesStorm) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Stream stream = RandomStream(seed, 30, 3);
    const int tprime = 3 + static_cast<int>(seed % 3);
    const int delta = tprime + static_cast<int>(seed % 2);
    StormPlusPlus pp(tprime, 2, delta);
    Storm storm(GuessSet(tprime, delta).back(), 2);
    const auto a = Drive(pp, stream);
    const auto b = Drive(storm, stream);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(Ids(a[i]), Ids(b[i]));
      EXPECT_EQ(a[i].gain_at_emission(), b[i].gain_at_emission());
    }
  }
}

TEST(StormPlusPlus, AtLeastHalfOfCoveringGuess) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const TinyInstance tiny = MakeTinyInstance(seed);
    StormPlusPlus pp(tiny.visit_bound, tiny.k, tiny.delta);
    const auto guesses = GuessSet(tiny.visit_bound, tiny.delta);
    const int g = *std::lower_bound(guesses.begin(), guesses.end(),
                                    tiny.n_visits);
    Storm storm(g, tiny.k);
    const double pp_value = NaiveOutputsCoverage(Drive(pp, tiny.stream));
    const double storm_value = NaiveOutputsCoverage(Drive(storm, tiny.stream));
    EXPECT_GE(pp_value, 0.5 * storm_value - 1e-9) << "seed " << seed;
  }
}

TEST(StormPlusPlus, MemoryIsSumOfInnerStorms) {
  const Stream stream = RandomStream(9, 200, 4);
  StormPlusPlus pp(10, 3, 4);
  std::size_t peak = 0;
  for (const StreamEvent& e : stream) {
    pp.Step(e);
    peak = std::max(peak, pp.stored_copies());
  }
  EXPECT_LE(peak, static_cast<std::size_t>((4 + 8 + 12) * 3));
}

TEST(StormPlusPlus, TiesGoToSmallestGuess) {
  // Every guess sees the same single item; all inner outputs tie.
  StormPlusPlus pp(4, 1, 1);
  const auto out = pp.Step(Event("a", {1}, 1.0, true));
  ASSERT_TRUE(out.has_value());
  EXPECT_EQ(out->items()[0].copy_tag >> 40, 1u);
}

}  // namespace
}  // namespace s3mor
