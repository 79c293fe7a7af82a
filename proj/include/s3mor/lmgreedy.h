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

#ifndef S3MOR_LMGREEDY_H_
#define S3MOR_LMGREEDY_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "s3mor/coverage.h"
#include "s3mor/policy.h"
#include "s3mor/random.h"

namespace s3mor {

// Linear-memory greedy: stores every arrived item and, at each visit, picks
// k distinct items one at a time by marginal gain over everything shown so
// far plus the partial slate. Items may reappear at later visits as new
// copies. Ties go to the earliest-arrived item.
//
// With sample_size > 0 each greedy step scans a uniform sample of
// min(sample_size, remaining) items instead of the whole pool.
class LmGreedy : public Policy {
 public:
  explicit LmGreedy(int k, std::size_t sample_size = 0,
                    std::uint64_t seed = 0);

  std::optional<OutputSet> Step(const StreamEvent& event) override;

  std::string name() const override { return "lmgreedy"; }
  std::uint64_t oracle_calls() const override { return oracle_.calls(); }
  std::size_t stored_copies() const override {
    return pool_.size() + shown_copies_;
  }

  const CoverageState& output_state() const { return output_state_; }

 private:
  int k_;
  std::size_t sample_size_;
  Rng rng_;
  CopyTagger tagger_;
  CountingOracle oracle_;
  std::vector<ItemRef> pool_;
  CoverageState output_state_;
  std::size_t shown_copies_ = 0;
  std::size_t visits_ = 0;
};

}  // namespace s3mor

#endif  // S3MOR_LMGREEDY_H_
