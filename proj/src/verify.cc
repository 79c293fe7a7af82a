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

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "s3mor/coverage.h"
#include "s3mor/harness.h"
#include "s3mor/lmgreedy.h"
#include "s3mor/offline_oracle.h"
#include "s3mor/policy_factory.h"
#include "s3mor/random.h"
#include "s3mor/storm.h"

namespace s3mor {
namespace {

bool Near(double actual, double expected) {
  const double scale = std::max(std::abs(actual), std::abs(expected));
  return std::abs(actual - expected) <= std::max(1e-12, 1e-9 * scale);
}

CheckResult ExpectValue(std::string name, double actual, double expected) {
  return CheckResult{std::move(name), Near(actual, expected),
                     fmt::format("got {:.12g}, want {:.12g}", actual,
                                 expected)};
}

RunReport RunFixture(const Stream& stream, const std::string& policy, int k,
                     int visit_bound) {
  const int visits = static_cast<int>(CountVisits(stream));
  return RunOne(stream, ParsePolicySpec(policy),
                RunContext{k, visits, visit_bound, 0});
}

ItemRef RandomItem(Rng& rng, std::size_t id, std::size_t universe,
                   std::size_t max_topics) {
  std::vector<TopicId> topics;
  const std::size_t count = rng.UniformInt(max_topics + 1);
  for (std::size_t i = 0; i < count; ++i) {
    topics.push_back(static_cast<TopicId>(rng.UniformInt(universe)));
  }
  const double roll = rng.UniformDouble();
  const double p = roll < 0.1 ? 1.0 : roll < 0.15 ? 0.0 : rng.UniformDouble();
  return MakeItemRef(std::to_string(id), std::move(topics), p);
}

}  // namespace

std::vector<CheckResult> RunFixtureSuite() {
  std::vector<CheckResult> out;
  const Stream c3 = FixtureStream("appendix-c3");
  out.push_back(ExpectValue("appendix-c3 storm T'=3 k=1",
                            RunFixture(c3, "storm", 1, 3).total_coverage,
                            3.8));
  out.push_back(ExpectValue("appendix-c3 storm T'=2 k=1",
                            RunFixture(c3, "storm", 1, 2).total_coverage,
                            3.0));
  out.push_back(ExpectValue("appendix-c3 stormpp T'=3 delta=3 k=1",
                            RunFixture(c3, "stormpp delta=3", 1, 3)
                                .total_coverage,
                            3.8));
  out.push_back(ExpectValue("appendix-c3 lmgreedy k=1",
                            RunFixture(c3, "lmgreedy", 1, 2).total_coverage,
                            3.8));
  out.push_back(ExpectValue("appendix-c3 sievepp epsilon=0.1 k=1",
                            RunFixture(c3, "sievepp", 1, 2).total_coverage,
                            3.8));
  out.push_back(ExpectValue("appendix-c3 preemption c=1 k=1",
                            RunFixture(c3, "preemption", 1, 2).total_coverage,
                            3.0));
  out.push_back(ExpectValue("appendix-c3 brute-force OPT k=1",
                            BruteForceOpt(c3, 1).value, 3.8));

  for (int tprime : {2, 3, 5}) {
    const Stream tight = FixtureStream("storm-tight", tprime);
    const double storm =
        RunFixture(tight, "storm", 1, tprime).total_coverage;
    const double opt = BruteForceOpt(tight, 1).value;
    out.push_back(ExpectValue(fmt::format("storm-tight({}) storm k=1", tprime),
                              storm, 1.0));
    out.push_back(ExpectValue(
        fmt::format("storm-tight({}) brute-force OPT k=1", tprime), opt,
        static_cast<double>(tprime)));
    const double bound = 1.0 / (4.0 * tprime);
    const RatioCheck ratio = CheckRatio(storm, opt, bound);
    out.push_back(CheckResult{
        fmt::format("storm-tight({}) ratio bound 1/(4(T'-T+1))", tprime),
        ratio.passed, fmt::format("margin {:.12g}", ratio.margin)});
  }

  const Stream adversarial = FixtureStream("thm1-adversarial");
  const RunReport greedy = RunFixture(adversarial, "lmgreedy", 1, 2);
  out.push_back(ExpectValue("thm1-adversarial lmgreedy first slate gain",
                            greedy.outputs.at(0).gain_at_emission(), 2.0));
  out.push_back(ExpectValue("thm1-adversarial brute-force OPT k=1",
                            BruteForceOpt(adversarial, 1).value, 4.0));
  return out;
}

std::vector<CheckResult> RunPropertySuite(std::uint64_t seed,
                                          const PropertyCounts& counts) {
  constexpr std::size_t kUniverse = 20;
  constexpr std::size_t kMaxTopics = 4;
  Rng rng(DeriveSeed(seed, HashLabel("properties")));
  std::size_t monotone_fail = 0;
  std::size_t submodular_fail = 0;
  std::size_t additive_fail = 0;
  std::size_t roundtrip_fail = 0;
  std::size_t next_id = 0;
  for (std::size_t trial = 0; trial < counts.triples; ++trial) {
    std::vector<ItemRef> b;
    const std::size_t size = rng.UniformInt(13);
    for (std::size_t i = 0; i < size; ++i) {
      b.push_back(RandomItem(rng, next_id++, kUniverse, kMaxTopics));
    }
    std::vector<ItemRef> a;
    for (const ItemRef& item : b) {
      if (rng.Bernoulli(0.5)) a.push_back(item);
    }
    const ItemRef e = RandomItem(rng, next_id++, kUniverse, kMaxTopics);
    const ItemRef e2 = RandomItem(rng, next_id++, kUniverse, kMaxTopics);
    CoverageState sa;
    CoverageState sb;
    for (const ItemRef& item : a) sa.Apply(*item);
    for (const ItemRef& item : b) sb.Apply(*item);
    if (sb.Value() < sa.Value() - 1e-9) ++monotone_fail;
    if (sa.MarginalGain(*e) < sb.MarginalGain(*e) - 1e-9) ++submodular_fail;

    const std::vector<ItemCopy> pair = {{e, 0}, {e2, 1}};
    CoverageState after = sa;
    const double first = after.MarginalGain(*e);
    after.Apply(*e);
    const double second = after.MarginalGain(*e2);
    if (!Near(sa.MarginalGain(pair), first + second)) ++additive_fail;

    after.Remove(*e);
    bool restored = Near(after.Value(), sa.Value());
    for (TopicId t : e->topics) {
      const SurvivalCell* before = sa.Cell(t);
      const SurvivalCell* now = after.Cell(t);
      const std::int64_t want = before ? before->contributor_count : 0;
      if (now == nullptr || now->contributor_count != want) restored = false;
    }
    if (!restored) ++roundtrip_fail;
  }

  std::size_t churn_fail = 0;
  double worst = 0.0;
  for (std::size_t trial = 0; trial < counts.churns; ++trial) {
    CoverageState state;
    std::vector<ItemCopy> held;
    for (std::uint64_t op = 0; op < 100; ++op) {
      if (!held.empty() && rng.Bernoulli(0.4)) {
        const std::size_t victim = rng.UniformInt(held.size());
        state.Remove(*held[victim].item);
        held.erase(held.begin() + static_cast<std::ptrdiff_t>(victim));
      } else {
        const ItemRef item = RandomItem(rng, next_id++, kUniverse, kMaxTopics);
        state.Apply(*item);
        held.push_back({item, op});
      }
    }
    const double reference = RecomputeFromScratch(held).Value();
    const double scale = std::max(std::abs(reference), 1e-3);
    worst = std::max(worst, std::abs(state.Value() - reference) / scale);
    if (!Near(state.Value(), reference)) ++churn_fail;
  }

  auto summary = [](std::string name, std::size_t failures, std::size_t n) {
    return CheckResult{std::move(name), failures == 0,
                       fmt::format("{}/{} passed", n - failures, n)};
  };
  return {
      summary("monotonicity", monotone_fail, counts.triples),
      summary("submodularity", submodular_fail, counts.triples),
      summary("gain additivity", additive_fail, counts.triples),
      summary("apply/remove round trip", roundtrip_fail, counts.triples),
      CheckResult{"churn matches recompute", churn_fail == 0,
                  fmt::format("{}/{} passed, worst relative error {:.3g}",
                              counts.churns - churn_fail, counts.churns,
                              worst)},
  };
}

TinyInstance MakeTinyInstance(std::uint64_t seed) {
  Rng rng(seed);
  TinyInstance instance;
  const std::size_t n = 1 + rng.UniformInt(8);
  instance.n_visits = 1 + static_cast<int>(rng.UniformInt(std::min<std::size_t>(3, n)));
  instance.k = 1 + static_cast<int>(rng.UniformInt(2));
  instance.visit_bound =
      instance.n_visits +
      static_cast<int>(rng.UniformInt(static_cast<std::uint64_t>(6 - instance.n_visits)));
  instance.delta = 1 + static_cast<int>(rng.UniformInt(3));
  std::vector<ItemRef> items;
  for (std::size_t i = 0; i < n; ++i) {
    items.push_back(RandomItem(rng, i, 6, 3));
  }
  const auto schedule = MakeVisitSchedule(
      n, static_cast<std::size_t>(instance.n_visits), DeriveSeed(seed, 1));
  instance.stream = BuildStream(items, schedule);
  return instance;
}

std::vector<CheckResult> RunRatioSuite(std::uint64_t seed,
                                       const RatioCounts& counts) {
  struct Bound {
    std::string name;
    std::size_t failures = 0;
    double min_margin = INFINITY;
    std::vector<std::size_t> failing;
  };
  std::vector<Bound> bounds;
  for (const char* name :
       {"lmgreedy >= OPT/2", "storm(T) >= OPT/4",
        "storm(T') >= OPT/(4(T'-T+1))", "stormpp >= OPT/(8 delta)",
        "stormpp >= storm(g)/2, g the smallest guess >= T",
        "policy values <= OPT"}) {
    bounds.push_back(Bound{name, 0, INFINITY, {}});
  }
  auto record = [](Bound& bound, std::size_t index, const RatioCheck& check) {
    bound.min_margin = std::min(bound.min_margin, check.margin);
    if (!check.passed) {
      ++bound.failures;
      bound.failing.push_back(index);
    }
  };
  std::size_t vacuous = 0;
  for (std::size_t i = 0; i < counts.streams; ++i) {
    const TinyInstance tiny = MakeTinyInstance(DeriveSeed(seed, i));
    const double opt = BruteForceOpt(tiny.stream, tiny.k).value;
    const RunContext context{tiny.k, tiny.n_visits, tiny.visit_bound, 0};
    auto run = [&](const std::string& policy) {
      return RunOne(tiny.stream, ParsePolicySpec(policy), context)
          .total_coverage;
    };
    const double greedy = run("lmgreedy");
    const double storm_t = run("storm tprime=T");
    const double storm_tp = run("storm");
    const double stormpp = run(fmt::format("stormpp delta={}", tiny.delta));
    const std::vector<int> guesses = GuessSet(tiny.visit_bound, tiny.delta);
    const int covering = *std::lower_bound(guesses.begin(), guesses.end(),
                                           tiny.n_visits);
    const double storm_g = run(fmt::format("storm tprime={}", covering));

    const double best = std::max({greedy, storm_t, storm_tp, stormpp});
    const double above = opt - best;
    record(bounds[5], i, RatioCheck{above >= -1e-9, above});
    if (storm_g > 0.0) {
      record(bounds[4], i, CheckRatio(stormpp, storm_g, 0.5));
    }
    if (!(opt > 0.0)) {
      ++vacuous;
      continue;
    }
    record(bounds[0], i, CheckRatio(greedy, opt, 0.5));
    record(bounds[1], i, CheckRatio(storm_t, opt, 0.25));
    record(bounds[2], i,
           CheckRatio(storm_tp, opt,
                      1.0 / (4.0 * (tiny.visit_bound - tiny.n_visits + 1))));
    record(bounds[3], i, CheckRatio(stormpp, opt, 1.0 / (8.0 * tiny.delta)));
  }
  std::vector<CheckResult> out;
  for (const Bound& bound : bounds) {
    std::string detail = fmt::format("{} failures over {} streams",
                                     bound.failures, counts.streams);
    if (std::isfinite(bound.min_margin)) {
      detail += fmt::format(", min margin {:.12g}", bound.min_margin);
    }
    if (!bound.failing.empty()) {
      detail += fmt::format(", failing streams {}",
                            fmt::join(bound.failing, " "));
    }
    out.push_back(CheckResult{bound.name, bound.failures == 0, detail});
  }
  out.push_back(CheckResult{
      "instances with positive OPT", true,
      fmt::format("{}/{}", counts.streams - vacuous, counts.streams)});
  return out;
}

std::vector<std::string> VerifySuiteNames() {
  return {"fixtures", "properties", "ratios"};
}

std::vector<CheckResult> RunVerifySuite(const std::string& suite,
                                        std::uint64_t seed) {
  if (suite == "fixtures") return RunFixtureSuite();
  if (suite == "properties") return RunPropertySuite(seed);
  if (suite == "ratios") return RunRatioSuite(seed);
  throw std::invalid_argument(
      fmt::format("unknown verify suite '{}' (expected one of: {})", suite,
                  fmt::join(VerifySuiteNames(), ", ")));
}

std::string FormatCheckLines(const std::vector<CheckResult>& results) {
  std::string out;
  for (const CheckResult& result : results) {
    out += fmt::format("{} {}: {}\n", result.passed ? "PASS" : "FAIL",
                       result.name, result.detail);
  }
  return out;
}

std::string FormatVerifyJson(const std::string& suite, std::uint64_t seed,
                             const std::vector<CheckResult>& results) {
  nlohmann::ordered_json report;
  report["suite"] = suite;
  report["seed"] = seed;
  report["passed"] = AllPassed(results);
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const CheckResult& result : results) {
    checks.push_back({{"name", result.name},
                      {"passed", result.passed},
                      {"detail", result.detail}});
  }
  report["checks"] = std::move(checks);
  return report.dump(2) + "\n";
}

bool AllPassed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.passed; });
}

}  // namespace s3mor
