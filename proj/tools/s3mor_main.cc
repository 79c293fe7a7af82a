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

// Command-line driver: gen, run, sweep, verify, fixtures.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or config error.
// Reports go to --out, else to $S3MOR_OUT_DIR, else to the working
// directory.

#include <fmt/format.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "s3mor/harness.h"
#include "s3mor/policy_factory.h"
#include "s3mor/stream.h"
#include "s3mor/verify.h"

namespace {

namespace fs = std::filesystem;
using namespace s3mor;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

fs::path DefaultOutDir() {
  const char* env = std::getenv("S3MOR_OUT_DIR");
  return env != nullptr && *env != '\0' ? fs::path(env) : fs::path(".");
}

fs::path ResolveOut(const std::string& flag, const std::string& fallback) {
  return flag.empty() ? DefaultOutDir() / fallback : fs::path(flag);
}

// Coverage with at least one decimal, e.g. 3.0, 3.8, 0.75.
std::string FormatCoverage(double value) {
  std::string text = fmt::format("{:.12g}", value);
  if (text.find_first_of(".eEn") == std::string::npos) text += ".0";
  return text;
}

struct GenFlags {
  std::size_t n = 1000;
  std::size_t topics = 40;
  std::string topics_per_item = "1:3";
  double prob_lo = 0.0;
  double prob_hi = 0.2;
  std::size_t visits = 5;
  std::uint64_t seed = 1;
  std::string out;
};

int RunGen(const GenFlags& flags) {
  StreamConfig config;
  config.n_items = flags.n;
  config.n_visits = flags.visits;
  config.visit_bound = flags.visits;
  config.k = 1;
  config.prob_lo = flags.prob_lo;
  config.prob_hi = flags.prob_hi;
  config.seed = flags.seed;
  SyntheticTopics synthetic;
  synthetic.topic_universe = flags.topics;
  const auto colon = flags.topics_per_item.find(':');
  try {
    synthetic.min_topics_per_item =
        std::stoul(flags.topics_per_item.substr(0, colon));
    synthetic.max_topics_per_item =
        colon == std::string::npos
            ? synthetic.min_topics_per_item
            : std::stoul(flags.topics_per_item.substr(colon + 1));
  } catch (const std::logic_error&) {
    throw std::invalid_argument("--topics-per-item expects min:max, got '" +
                                flags.topics_per_item + "'");
  }
  config.topic_source = synthetic;
  config.Validate();
  const Stream stream = GenerateStream(config, flags.seed);
  const fs::path dir = flags.out.empty() ? DefaultOutDir() : fs::path(flags.out);
  fs::create_directories(dir);
  WriteItemFile(dir / "items.tsv", stream);
  WriteSchedule(dir / "schedule.txt", stream);
  std::cout << fmt::format("wrote {} items and {} visits to {}\n",
                           stream.size(), CountVisits(stream), dir.string());
  return kOk;
}

struct RunFlags {
  std::string fixture;
  std::string items;
  std::string probs;
  std::string schedule;
  std::string policy = "storm";
  std::vector<std::string> params;
  std::optional<int> visit_bound;
  int k = 10;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
  bool timing = false;
};

Stream LoadRunStream(const RunFlags& flags) {
  if (!flags.fixture.empty()) {
    if (!flags.items.empty()) {
      throw std::invalid_argument("--fixture and --items are exclusive");
    }
    return FixtureStream(flags.fixture, flags.visit_bound.value_or(0));
  }
  if (flags.items.empty() || flags.schedule.empty()) {
    throw std::invalid_argument(
        "run needs --fixture, or --items together with --schedule");
  }
  const ItemTable table = LoadItems(flags.items);
  const ProbSource probs = flags.probs.empty()
                               ? ProbSource{EmbeddedProbs{}}
                               : ProbSource{ProbFile{flags.probs}};
  const std::vector<ItemRef> items = AssignProbs(table.items, probs);
  return BuildStream(items, LoadSchedule(flags.schedule));
}

int RunRun(const RunFlags& flags) {
  const Stream stream = LoadRunStream(flags);
  std::string spec_text = flags.policy;
  for (const std::string& param : flags.params) spec_text += " " + param;
  const PolicySpec spec = ParsePolicySpec(spec_text);
  const int visits = static_cast<int>(CountVisits(stream));
  const RunContext context{flags.k, visits, flags.visit_bound.value_or(visits),
                           flags.seed};
  if (context.k < 1 || context.visit_bound < 1) {
    throw std::invalid_argument("--k and --Tprime must be positive");
  }
  const RunReport report = RunOne(stream, spec, context, flags.timing);
  const ReportFormat format = ParseReportFormat(flags.format);
  const fs::path path = ResolveOut(flags.out, "run." + flags.format);
  if (format == ReportFormat::kJson) {
    WriteTextFile(path, FormatRunReport(report));
  } else {
    SweepRow row;
    row.sweep_param = "none";
    row.policy = report.policy;
    row.mean_coverage = report.total_coverage;
    row.mean_oracle_calls = static_cast<double>(report.oracle_calls);
    row.mean_peak_copies = static_cast<double>(report.peak_copies);
    row.mean_wall_time_s = report.wall_time_s;
    row.exhaustion_count = report.exhausted ? 1 : 0;
    EmitReport({row}, path, format);
  }
  std::cout << fmt::format(
      "coverage={} policy={} visits={} oracle_calls={} peak_copies={} "
      "exhausted={}\n",
      FormatCoverage(report.total_coverage), report.policy,
      report.outputs.size(), report.oracle_calls, report.peak_copies,
      report.exhausted ? "yes" : "no");
  return kOk;
}

struct SweepFlags {
  std::string config;
  std::string out;
  std::string format;
  std::optional<std::uint64_t> seed;
  bool timing = false;
};

int RunSweepCommand(const SweepFlags& flags) {
  ExperimentConfig config = LoadExperimentConfig(flags.config);
  if (flags.seed) config.stream.seed = *flags.seed;
  if (!flags.format.empty()) config.format = flags.format;
  if (flags.timing) config.record_timing = true;
  config.Validate();
  const ReportFormat format = ParseReportFormat(config.format);
  fs::path path = ResolveOut(flags.out, "sweep." + config.format);
  if (flags.out.empty() && !config.output.empty()) path = config.output;
  const std::vector<SweepRow> rows = RunSweep(config);
  EmitReport(rows, path, format);
  std::cout << fmt::format("wrote {} rows to {}\n", rows.size(),
                           path.string());
  return kOk;
}

struct VerifyFlags {
  std::string suite;
  std::uint64_t seed = 7;
  std::string out;
};

int RunVerify(const VerifyFlags& flags) {
  const std::vector<CheckResult> results =
      RunVerifySuite(flags.suite, flags.seed);
  const fs::path path = ResolveOut(flags.out, "verify-" + flags.suite + ".json");
  WriteTextFile(path, FormatVerifyJson(flags.suite, flags.seed, results));
  std::cout << FormatCheckLines(results);
  const bool passed = AllPassed(results);
  std::cout << fmt::format("{}: {} checks, {}\n", flags.suite, results.size(),
                           passed ? "all passed" : "FAILURES");
  return passed ? kOk : kFailure;
}

struct FixturesFlags {
  std::string show;
  int visit_bound = 3;
  std::uint64_t seed = 0;
};

int RunFixtures(const FixturesFlags& flags) {
  if (flags.show.empty()) {
    for (const std::string& name : FixtureNames()) std::cout << name << "\n";
    return kOk;
  }
  const Stream stream = FixtureStream(flags.show, flags.visit_bound);
  for (const StreamEvent& event : stream) {
    std::cout << fmt::format("{}\t{{{}}}\t{:.12g}\t{}\n", event.item->id,
                             fmt::join(event.item->topics, ","),
                             event.item->click_prob, event.visit ? 1 : 0);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming coverage maximization with on-demand visits"};
  app.require_subcommand(1);

  GenFlags gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write a synthetic item file and visit schedule");
  gen_cmd->add_option("--n", gen.n, "Number of items")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--topics", gen.topics, "Topic universe size");
  gen_cmd->add_option("--topics-per-item", gen.topics_per_item, "min:max topics per item");
  gen_cmd->add_option("--prob-lo", gen.prob_lo, "Lowest click probability");
  gen_cmd->add_option("--prob-hi", gen.prob_hi, "Highest click probability");
  gen_cmd->add_option("--T", gen.visits, "Number of visits");
  gen_cmd->add_option("--seed", gen.seed, "Seed");
  gen_cmd->add_option("--out", gen.out, "Output directory");

  RunFlags run;
  auto* run_cmd = app.add_subcommand("run", "Run one policy over one stream");
  run_cmd->add_option("--fixture", run.fixture, "Fixture stream name");
  run_cmd->add_option("--items", run.items, "Item file");
  run_cmd->add_option("--probs", run.probs, "Probability file");
  run_cmd->add_option("--schedule", run.schedule, "Visit schedule file");
  run_cmd->add_option("--policy", run.policy, "Policy name, optionally with key=value parameters");
  run_cmd->add_option("--param", run.params, "Policy parameter key=value (repeatable)");
  run_cmd->add_option("--Tprime", run.visit_bound, "Visit bound T'");
  run_cmd->add_option("--k", run.k, "Items per visit");
  run_cmd->add_option("--seed", run.seed, "Seed");
  run_cmd->add_option("--out", run.out, "Report path");
  run_cmd->add_option("--format", run.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  run_cmd->add_flag("--timing", run.timing, "Record wall time");

  SweepFlags sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run an experiment config");
  sweep_cmd->add_option("--config", sweep.config, "Experiment config file")->required();
  sweep_cmd->add_option("--out", sweep.out, "Report path");
  sweep_cmd->add_option("--format", sweep.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sweep_cmd->add_option("--seed", sweep.seed, "Override the master seed");
  sweep_cmd->add_flag("--timing", sweep.timing, "Record wall time");

  VerifyFlags verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run a self-check suite");
  verify_cmd->add_option("suite", verify.suite, "fixtures, properties or ratios")
      ->required()
      ->check(CLI::IsMember(VerifySuiteNames()));
  verify_cmd->add_option("--seed", verify.seed, "Seed");
  verify_cmd->add_option("--out", verify.out, "Report path");

  FixturesFlags fixtures;
  auto* fixtures_cmd = app.add_subcommand("fixtures", "List or print fixture streams");
  fixtures_cmd->add_option("--show", fixtures.show, "Fixture to print");
  fixtures_cmd->add_option("--Tprime", fixtures.visit_bound, "Parameter of storm-tight");
  fixtures_cmd->add_option("--seed", fixtures.seed, "Unused; fixtures are fixed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen_cmd) return RunGen(gen);
    if (*run_cmd) return RunRun(run);
    if (*sweep_cmd) return RunSweepCommand(sweep);
    if (*verify_cmd) return RunVerify(verify);
    if (*fixtures_cmd) return RunFixtures(fixtures);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
