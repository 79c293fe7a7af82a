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

#include "s3mor/harness.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "s3mor/lmgreedy.h"
#include "s3mor/storm.h"
#include "test_util.h"

namespace s3mor {
namespace {

namespace fs = std::filesystem;

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path TempPath(const std::string& name) {
  return fs::temp_directory_path() /
         (std::string("harness_") +
          ::testing::UnitTest::GetInstance()->current_test_info()->name() +
          "_" + name);
}

ExperimentConfig Parse(const std::string& text) {
  std::istringstream in(text);
  return ParseExperimentConfig(in, "test.cfg");
}

const char* kSmallConfig = R"(
# small synthetic experiment
seed = 3
n_items = 400
T = 3
delta_T = 7
k = 4
topics = 20
topics_per_item = 1:3
repetitions = 4
policy = lmgreedy
policy = storm tprime=T
policy = stormpp delta=5
)";

TEST(PolicySpec, ParseAndLabel) {
  const PolicySpec spec = ParsePolicySpec("stormpp tprime=T delta=3");
  EXPECT_EQ(spec.name, "stormpp");
  EXPECT_EQ(spec.Label(), "stormpp[delta=3;tprime=T]");
  EXPECT_EQ(ParsePolicySpec("storm").Label(), "storm");
}

TEST(PolicySpec, RejectsUnknownNamesKeysAndValues) {
  EXPECT_THROW(ParsePolicySpec("greedy"), std::invalid_argument);
  EXPECT_THROW(ParsePolicySpec("storm delta=3"), std::invalid_argument);
  EXPECT_THROW(ParsePolicySpec("stormpp delta=abc"), std::invalid_argument);
  EXPECT_THROW(ParsePolicySpec("stormpp delta=0"), std::invalid_argument);
  EXPECT_THROW(ParsePolicySpec("storm skip=1.5"), std::invalid_argument);
  EXPECT_THROW(ParsePolicySpec("sievepp epsilon=0"), std::invalid_argument);
  EXPECT_THROW(ParsePolicySpec("storm tprime"), std::invalid_argument);
  EXPECT_THROW(ParsePolicySpec(""), std::invalid_argument);
}

TEST(MakePolicy, ResolvesVisitBound) {
  const RunContext context{2, 3, 9, 0};
  auto bound = MakePolicy(ParsePolicySpec("storm"), context);
  auto visits = MakePolicy(ParsePolicySpec("storm tprime=T"), context);
  auto fixed = MakePolicy(ParsePolicySpec("storm tprime=4"), context);
  EXPECT_EQ(dynamic_cast<Storm&>(*bound).visit_bound(), 9);
  EXPECT_EQ(dynamic_cast<Storm&>(*visits).visit_bound(), 3);
  EXPECT_EQ(dynamic_cast<Storm&>(*fixed).visit_bound(), 4);
  auto pp = MakePolicy(ParsePolicySpec("stormpp delta=4"), context);
  EXPECT_EQ(dynamic_cast<StormPlusPlus&>(*pp).guesses(),
            (std::vector<int>{4, 8, 12}));
}

TEST(RunOne, WorkedExampleStormTwo) {
  const RunReport report =
      RunOne(FixtureStream("appendix-c3"), ParsePolicySpec("storm"),
             RunContext{1, 2, 2, 0});
  EXPECT_NEAR(report.total_coverage, 3.0, 1e-12);
  EXPECT_EQ(report.outputs.size(), 2u);
  EXPECT_EQ(report.policy, "storm");
  EXPECT_EQ(report.wall_time_s, 0.0);
}

TEST(RunOne, TotalMatchesRecomputedOutputs) {
  StreamConfig config;
  config.n_items = 300;
  config.n_visits = 4;
  config.visit_bound = 8;
  config.k = 3;
  const Stream stream = GenerateStream(config, 12);
  for (const char* policy :
       {"lmgreedy", "storm", "stormpp delta=3", "sievepp", "preemption"}) {
    const RunReport report =
        RunOne(stream, ParsePolicySpec(policy), RunContext{3, 4, 8, 12});
    EXPECT_PRED2(testing::NearRel, report.total_coverage,
                 testing::NaiveOutputsCoverage(report.outputs))
        << policy;
    EXPECT_EQ(report.outputs.size(), 4u);
    EXPECT_GT(report.oracle_calls, 0u);
  }
}

TEST(RunOne, StormTightPeakWithinBound) {
  const RunReport report =
      RunOne(FixtureStream("storm-tight", 5), ParsePolicySpec("storm"),
             RunContext{1, 1, 5, 0});
  EXPECT_LE(report.peak_copies, 5u);
  EXPECT_EQ(report.total_coverage, 1.0);
}

TEST(RunOne, ExhaustionIsReported) {
  const RunReport report =
      RunOne(FixtureStream("appendix-c3"), ParsePolicySpec("storm tprime=1"),
             RunContext{1, 2, 2, 0});
  EXPECT_TRUE(report.exhausted);
  EXPECT_TRUE(report.outputs[1].items().empty());
}

TEST(RunOne, TimingOnlyWhenRequested) {
  StreamConfig config;
  config.n_items = 2000;
  const Stream stream = GenerateStream(config, 1);
  const RunReport timed = RunOne(stream, ParsePolicySpec("storm"),
                                 RunContext{10, 5, 50, 1}, true);
  EXPECT_GT(timed.wall_time_s, 0.0);
}

TEST(ExperimentConfig, ParsesDocumentedKeys) {
  const ExperimentConfig config = Parse(std::string(kSmallConfig) +
                                        "sweep = k\nsweep_values = 1, 2\n"
                                        "format = json\nout = r.json\n"
                                        "timing = true\nprob_hi = 0.3\n");
  EXPECT_EQ(config.stream.seed, 3u);
  EXPECT_EQ(config.stream.n_items, 400u);
  EXPECT_EQ(config.stream.n_visits, 3u);
  EXPECT_EQ(config.stream.visit_bound, 10u);
  EXPECT_EQ(config.stream.k, 4u);
  EXPECT_EQ(config.stream.prob_hi, 0.3);
  EXPECT_EQ(config.repetitions, 4u);
  ASSERT_EQ(config.policies.size(), 3u);
  EXPECT_EQ(config.policies[2].Label(), "stormpp[delta=5]");
  ASSERT_TRUE(config.sweep.has_value());
  EXPECT_EQ(config.sweep->values, (std::vector<double>{1, 2}));
  EXPECT_EQ(config.format, "json");
  EXPECT_EQ(config.output, "r.json");
  EXPECT_TRUE(config.record_timing);
  const auto& topics = std::get<SyntheticTopics>(config.stream.topic_source);
  EXPECT_EQ(topics.topic_universe, 20u);
  EXPECT_EQ(topics.max_topics_per_item, 3u);
}

TEST(ExperimentConfig, ErrorsNameTheLine) {
  try {
    Parse("seed = 1\nbogus = 2\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
  }
  EXPECT_THROW(Parse("k = ten\npolicy = storm\n"), ParseError);
  EXPECT_THROW(Parse("policy = nope\n"), ParseError);
  EXPECT_THROW(Parse("k = 3\n"), std::invalid_argument);  // no policy
  EXPECT_THROW(Parse("policy = storm\npolicy = storm\n"),
               std::invalid_argument);
}

TEST(ExperimentConfig, SweepValuesTypeCheck) {
  const std::string base = "policy = storm\n";
  EXPECT_THROW(Parse(base + "sweep = k\nsweep_values = 2.5\n"),
               std::invalid_argument);
  EXPECT_THROW(Parse(base + "sweep = colour\nsweep_values = 1\n"),
               std::invalid_argument);
  EXPECT_THROW(Parse(base + "sweep = k\n"), std::invalid_argument);
  EXPECT_NO_THROW(Parse("policy = sievepp\nsweep = epsilon\n"
                        "sweep_values = 0.05,0.2\n"));
}

TEST(ExperimentConfig, MissingFileNamesPath) {
  try {
    LoadExperimentConfig("/nonexistent/exp.cfg");
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/exp.cfg"),
              std::string::npos);
  }
}

TEST(ApplySweepValue, SetsStreamAndPolicyParameters) {
  const ExperimentConfig config = Parse(kSmallConfig);
  EXPECT_EQ(ApplySweepValue(config, "k", 7).stream.k, 7u);
  EXPECT_EQ(ApplySweepValue(config, "delta_T", 20).stream.visit_bound, 23u);
  const ExperimentConfig swept = ApplySweepValue(config, "delta", 2);
  EXPECT_EQ(swept.policies[2].params.at("delta"), "2");
  EXPECT_EQ(swept.policies[0].Label(), "lmgreedy");
}

TEST(RunSweep, SingleRowMatchesRunOne) {
  ExperimentConfig config = Parse(
      "seed = 5\nn_items = 200\nT = 2\ndelta_T = 3\nk = 1\n"
      "repetitions = 1\npolicy = storm\nsweep = k\nsweep_values = 1\n");
  const auto rows = RunSweep(config);
  ASSERT_EQ(rows.size(), 1u);
  const Stream stream = GenerateStream(config.stream, UserSeed(5, 0));
  const RunReport report = RunOne(stream, config.policies[0],
                                  RunContext{1, 2, 5, UserSeed(5, 0)});
  EXPECT_EQ(rows[0].mean_coverage, report.total_coverage);
  EXPECT_EQ(rows[0].std_coverage, 0.0);
  EXPECT_EQ(rows[0].mean_oracle_calls,
            static_cast<double>(report.oracle_calls));
  EXPECT_EQ(rows[0].mean_peak_copies,
            static_cast<double>(report.peak_copies));
  EXPECT_EQ(rows[0].sweep_param, "k");
}

TEST(RunSweep, RowsOrderedAndShaped) {
  const ExperimentConfig config =
      Parse(std::string(kSmallConfig) + "sweep = k\nsweep_values = 5,1,3\n");
  const auto rows = RunSweep(config);
  ASSERT_EQ(rows.size(), 9u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const bool ordered =
        rows[i - 1].sweep_value < rows[i].sweep_value ||
        (rows[i - 1].sweep_value == rows[i].sweep_value &&
         rows[i - 1].policy < rows[i].policy);
    EXPECT_TRUE(ordered) << i;
  }
  EXPECT_EQ(rows[0].policy, "lmgreedy");
  EXPECT_EQ(rows[1].policy, "storm[tprime=T]");
  EXPECT_EQ(rows[2].policy, "stormpp[delta=5]");
}

TEST(RunSweep, NoAxisGivesNoneGroup) {
  const auto rows = RunSweep(Parse(kSmallConfig));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].sweep_param, "none");
}

TEST(RunSweep, DeltaSweepKeepsSeriesLabel) {
  const ExperimentConfig config =
      Parse("n_items = 300\nT = 3\ndelta_T = 12\nk = 3\nrepetitions = 2\n"
            "policy = stormpp\nsweep = delta\nsweep_values = 3,10,30\n");
  const auto rows = RunSweep(config);
  ASSERT_EQ(rows.size(), 3u);
  for (const SweepRow& row : rows) EXPECT_EQ(row.policy, "stormpp");
  const std::string csv = FormatReport(rows, ReportFormat::kCsv);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(RunSweep, AddingPolicyDoesNotPerturbOthers) {
  const ExperimentConfig one = Parse(
      "n_items = 300\nT = 3\nk = 3\nrepetitions = 3\npolicy = storm\n");
  const ExperimentConfig two = Parse(
      "n_items = 300\nT = 3\nk = 3\nrepetitions = 3\npolicy = lmgreedy\n"
      "policy = storm\n");
  EXPECT_EQ(RunSweep(one)[0].mean_coverage, RunSweep(two)[1].mean_coverage);
}

TEST(RunSweep, MemoryOrderingAtMatchedParameters) {
  // N = 2000 > T'^2 k / delta = 400 * 5 / 10.
  const ExperimentConfig config =
      Parse("n_items = 2000\nT = 5\ndelta_T = 15\nk = 5\nrepetitions = 3\n"
            "policy = storm\npolicy = stormpp delta=10\npolicy = lmgreedy\n");
  const auto rows = RunSweep(config);
  std::map<std::string, double> peak;
  for (const SweepRow& row : rows) peak[row.policy] = row.mean_peak_copies;
  EXPECT_LE(peak["storm"], peak["stormpp[delta=10]"]);
  EXPECT_LE(peak["stormpp[delta=10]"], peak["lmgreedy"]);
}

TEST(RunOne, StormOracleCallsLinearInBoundAndBudget) {
  StreamConfig config;
  config.n_items = 3000;
  const Stream stream = GenerateStream(config, 2);
  auto calls = [&](int k, int tprime) {
    return static_cast<double>(RunOne(stream, ParsePolicySpec("storm"),
                                      RunContext{k, 5, tprime, 2})
                                   .oracle_calls);
  };
  const double base = calls(5, 20);
  EXPECT_LE(calls(10, 20) / base, 2.5);
  EXPECT_GE(calls(10, 20) / base, 1.5);
  EXPECT_LE(calls(5, 40) / base, 2.5);
  EXPECT_GE(calls(5, 40) / base, 1.5);
}

TEST(Reports, EmptyTableIsHeaderOnly) {
  EXPECT_EQ(FormatReport({}, ReportFormat::kCsv),
            "sweep_param,sweep_value,policy,mean_coverage,std_coverage,"
            "mean_oracle_calls,mean_peak_copies,mean_wall_time_s,"
            "exhaustion_count\n");
  EXPECT_EQ(FormatReport({}, ReportFormat::kJson), "[]\n");
}

TEST(Reports, JsonRoundTrip) {
  SweepRow row{"k", 5, "storm[tprime=T]", 12.3456789012, 0.5, 1234, 50,
               0.0, 2};
  const auto back = ParseJsonReport(FormatReport({row}, ReportFormat::kJson));
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].sweep_param, row.sweep_param);
  EXPECT_EQ(back[0].sweep_value, row.sweep_value);
  EXPECT_EQ(back[0].policy, row.policy);
  EXPECT_EQ(back[0].mean_coverage, row.mean_coverage);
  EXPECT_EQ(back[0].std_coverage, row.std_coverage);
  EXPECT_EQ(back[0].mean_oracle_calls, row.mean_oracle_calls);
  EXPECT_EQ(back[0].mean_peak_copies, row.mean_peak_copies);
  EXPECT_EQ(back[0].exhaustion_count, row.exhaustion_count);
}

TEST(Reports, TwelveSignificantDigits) {
  SweepRow row{"none", 0, "storm", 1.0 / 3.0, 0, 0, 0, 0, 0};
  const std::string csv = FormatReport({row}, ReportFormat::kCsv);
  EXPECT_NE(csv.find(",0.333333333333,"), std::string::npos) << csv;
  const std::string json = FormatReport({row}, ReportFormat::kJson);
  EXPECT_NE(json.find("0.333333333333"), std::string::npos);
  EXPECT_EQ(json.find("0.3333333333333"), std::string::npos);
}

TEST(Reports, EmitIsReproducibleAndSurfacesPath) {
  const ExperimentConfig config = Parse(kSmallConfig);
  const fs::path a = TempPath("a.csv");
  const fs::path b = TempPath("b.csv");
  EmitReport(RunSweep(config), a, ReportFormat::kCsv);
  EmitReport(RunSweep(config), b, ReportFormat::kCsv);
  EXPECT_EQ(ReadFile(a), ReadFile(b));
  try {
    EmitReport({}, "/nonexistent/dir/out.csv", ReportFormat::kCsv);
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/out.csv"),
              std::string::npos);
  }
}

TEST(Reports, RunReportListsSlates) {
  const RunReport report =
      RunOne(FixtureStream("appendix-c3"), ParsePolicySpec("storm"),
             RunContext{1, 2, 3, 0});
  const std::string json = FormatRunReport(report);
  EXPECT_NE(json.find("\"total_coverage\": 3.8"), std::string::npos) << json;
  EXPECT_NE(json.find("\"V3\""), std::string::npos);
}

}  // namespace
}  // namespace s3mor
