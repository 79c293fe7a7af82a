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
// Single-solution streaming algorithms adapted to on-demand visits: each
// segment of the stream between two visits gets a fresh instance that
// maximizes g(X) = f(X | everything shown before), and the instance's
// solution is shown at the visit closing the segment.
//

#ifndef S3MOR_BASELINES_H_
#define S3MOR_BASELINES_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "s3mor/coverage.h"
#include "s3mor/policy.h"
#include "s3mor/storm.h"

namespace s3mor {

// Threshold sieve over the grid (1+eps)^h within
// [max(LB, m) / (2k (1+eps)), m], where m is the best singleton g-value of
// the segment and LB the best sieve value so far. An item joins a non-full
// sieve when its g-marginal is at least the sieve's threshold.
class SieveStreamingPP : public Policy {
 public:
  explicit SieveStreamingPP(int k, double epsilon = 0.1);

  std::optional<OutputSet> Step(const StreamEvent& event) override;

  std::string name() const override { return "sievepp"; }
  std::uint64_t oracle_calls() const override { return oracle_.calls(); }
  std::size_t stored_copies() const override;

  // Thresholds alive in the current segment, ascending.
  std::vector<double> thresholds() const;

 private:
  struct Sieve {
    std::vector<ItemCopy> items;
    CoverageState state;  // shown outputs plus items
    double value = 0.0;   // g(items)
  };

  double Threshold(int exponent) const;

  int k_;
  double epsilon_;
  CopyTagger tagger_;
  CountingOracle oracle_;
  CoverageState output_state_;
  std::map<int, Sieve> sieves_;  // keyed by grid exponent h
  double max_singleton_ = 0.0;
  double lower_bound_ = 0.0;
  std::size_t shown_copies_ = 0;
  std::size_t visits_ = 0;
};

// One set of at most k copies per segment. Free space is always filled;
// otherwise the arrival replaces the member with the smallest recorded gain
// when its g-marginal exceeds (1 + c) times that recorded gain.
class PreemptionStreaming : public Policy {
 public:
  explicit PreemptionStreaming(int k, double c = 1.0);

  std::optional<OutputSet> Step(const StreamEvent& event) override;

  std::string name() const override { return "preemption"; }
  std::uint64_t oracle_calls() const override { return oracle_.calls(); }
  std::size_t stored_copies() const override {
    return held_.size() + shown_copies_;
  }

  const std::vector<CandidateSlot>& held() const { return held_; }

 private:
  int k_;
  double c_;
  CopyTagger tagger_;
  CountingOracle oracle_;
  CoverageState output_state_;
  CoverageState segment_state_;  // shown outputs plus held_
  std::vector<CandidateSlot> held_;
  std::uint64_t next_order_ = 0;
  std::size_t shown_copies_ = 0;
  std::size_t visits_ = 0;
};

}  // namespace s3mor

#endif  // S3MOR_BASELINES_H_
