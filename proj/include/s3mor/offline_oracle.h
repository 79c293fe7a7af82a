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
// Exhaustive offline optimum for tiny instances.
//
// The feasible region is a partition matroid over per-visit copies: visit t
// may take any <= k items among those arrived by its event, independently of
// the other visits.
//

#ifndef S3MOR_OFFLINE_ORACLE_H_
#define S3MOR_OFFLINE_ORACLE_H_

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "s3mor/stream.h"

namespace s3mor {

inline constexpr double kMaxOptCombinations = 1e7;

class SearchSpaceTooLarge : public std::runtime_error {
 public:
  explicit SearchSpaceTooLarge(double combinations);
  double combinations() const { return combinations_; }

 private:
  double combinations_;
};

// per_visit[t] holds sorted stream positions, each <= the t-th visit's
// position.
struct FeasibleAssignment {
  std::vector<std::vector<std::size_t>> per_visit;

  bool IsFeasible(const Stream& stream, int k) const;
};

struct OptResult {
  double value = 0.0;
  FeasibleAssignment assignment;
};

// prod_t sum_{s <= k} C(r_t, s), saturating at +inf.
double CountAssignments(const Stream& stream, int k);

// Ties resolve to the lexicographically smallest assignment. Throws
// SearchSpaceTooLarge above `max_combinations`.
OptResult BruteForceOpt(const Stream& stream, int k,
                        double max_combinations = kMaxOptCombinations);

// Coverage of an assignment evaluated from scratch.
double AssignmentValue(const Stream& stream,
                       const FeasibleAssignment& assignment);

struct RatioCheck {
  bool passed = false;
  double margin = 0.0;  // policy_value - bound * opt_value
};

// Passes iff policy_value >= bound * opt_value - 1e-9. Requires opt > 0.
RatioCheck CheckRatio(double policy_value, double opt_value, double bound);

}  // namespace s3mor

#endif  // S3MOR_OFFLINE_ORACLE_H_
