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

//
// Experiment harness: runs policies over streams with instrumentation,
// aggregates repetitions across a sweep axis and writes CSV/JSON reports.
//

#ifndef S3MOR_HARNESS_H_
#define S3MOR_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "s3mor/policy.h"
#include "s3mor/policy_factory.h"
#include "s3mor/stream.h"

namespace s3mor {

struct RunReport {
  std::string policy;  // PolicySpec label
  std::vector<OutputSet> outputs;
  double total_coverage = 0.0;
  std::uint64_t oracle_calls = 0;
  std::size_t peak_copies = 0;
  double wall_time_s = 0.0;  // 0 unless timing was requested
  bool exhausted = false;
};

// Drives `policy` over the whole stream, sampling stored copies after every
// event. total_coverage is recomputed from scratch over every shown copy.
RunReport RunPolicy(const Stream& stream, Policy& policy,
                    bool record_timing = false);

RunReport RunOne(const Stream& stream, const PolicySpec& spec,
                 const RunContext& context, bool record_timing = false);

struct SweepAxis {
  std::string param;
  std::vector<double> values;
};

// Key-value experiment file, one "key = value" per line, '#' comments:
//
//   seed = 7                 master seed
//   n_items = 5000
//   T = 5                    visits per simulated user
//   delta_T = 45             T' = T + delta_T
//   k = 10
//   prob_lo = 0
//   prob_hi = 0.2
//   topics = 40              synthetic topic universe
//   topics_per_item = 1:3    synthetic topics per item (min:max)
//   item_file = path         instead of synthetic topics
//   prob_file = path         optional, with item_file
//   repetitions = 50         simulated users
//   policy = storm tprime=T  repeatable; see PolicySpec
//   sweep = k                any of: k T delta_T n_items prob_lo prob_hi,
//                            or a policy parameter (delta epsilon c sample
//                            skip)
//   sweep_values = 1,5,10
//   format = csv|json
//   out = report.csv
//   timing = false           wall time is only recorded when true
struct ExperimentConfig {
  StreamConfig stream;
  std::size_t delta_visits = 45;
  std::vector<PolicySpec> policies;
  std::size_t repetitions = 1;
  std::optional<SweepAxis> sweep;
  std::filesystem::path output;
  std::string format = "csv";
  bool record_timing = false;

  // Also resolves stream.visit_bound = T + delta_T.
  void Validate();
};

ExperimentConfig ParseExperimentConfig(std::istream& in,
                                       const std::string& source_name);
ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path);

// Returns a copy with the swept parameter set to `value`.
ExperimentConfig ApplySweepValue(const ExperimentConfig& config,
                                 const std::string& param, double value);

// Seed of simulated user `repetition`; independent of the policy list.
std::uint64_t UserSeed(std::uint64_t master_seed, std::size_t repetition);

struct SweepRow {
  std::string sweep_param;
  double sweep_value = 0.0;
  std::string policy;
  double mean_coverage = 0.0;
  double std_coverage = 0.0;  // sample standard deviation
  double mean_oracle_calls = 0.0;
  double mean_peak_copies = 0.0;
  double mean_wall_time_s = 0.0;
  std::size_t exhaustion_count = 0;
};

// Rows ordered by (sweep value, policy label). Without a sweep axis a single
// group is produced with sweep_param "none".
std::vector<SweepRow> RunSweep(const ExperimentConfig& config);

enum class ReportFormat { kCsv, kJson };

ReportFormat ParseReportFormat(const std::string& name);

// Numbers carry 12 significant digits.
std::string FormatReport(const std::vector<SweepRow>& rows,
                         ReportFormat format);
std::vector<SweepRow> ParseJsonReport(const std::string& text);

void EmitReport(const std::vector<SweepRow>& rows,
                const std::filesystem::path& path, ReportFormat format);

// Full single-run report (JSON) including every shown slate.
std::string FormatRunReport(const RunReport& report);

// Throws std::runtime_error naming the path.
void WriteTextFile(const std::filesystem::path& path, const std::string& text);

}  // namespace s3mor

#endif  // S3MOR_HARNESS_H_
