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
// Self-check suites driven by the CLI:
//
//   fixtures    replays the hard-coded streams against pinned values
//   properties  randomized objective checks (monotone, submodular, churn)
//   ratios      randomized tiny streams checked against brute-force optima
//

#ifndef S3MOR_VERIFY_H_
#define S3MOR_VERIFY_H_

#include <cstdint>
#include <string>
#include <vector>

#include "s3mor/stream.h"

namespace s3mor {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct PropertyCounts {
  std::size_t triples = 1000;  // (A, B, e) samples
  std::size_t churns = 500;    // apply/remove sequences
};

struct RatioCounts {
  std::size_t streams = 200;
};

std::vector<CheckResult> RunFixtureSuite();
std::vector<CheckResult> RunPropertySuite(std::uint64_t seed,
                                          const PropertyCounts& counts = {});
std::vector<CheckResult> RunRatioSuite(std::uint64_t seed,
                                       const RatioCounts& counts = {});

// Throws std::invalid_argument for names other than fixtures, properties
// and ratios.
std::vector<CheckResult> RunVerifySuite(const std::string& suite,
                                        std::uint64_t seed);

std::vector<std::string> VerifySuiteNames();

// Random stream with N <= 8, T <= 3, items over a small topic universe.
struct TinyInstance {
  Stream stream;
  int k = 1;
  int n_visits = 1;
  int visit_bound = 1;
  int delta = 1;
};
TinyInstance MakeTinyInstance(std::uint64_t seed);

// One "PASS name: detail" / "FAIL name: detail" line per check.
std::string FormatCheckLines(const std::vector<CheckResult>& results);

std::string FormatVerifyJson(const std::string& suite, std::uint64_t seed,
                             const std::vector<CheckResult>& results);

bool AllPassed(const std::vector<CheckResult>& results);

}  // namespace s3mor

#endif  // S3MOR_VERIFY_H_
