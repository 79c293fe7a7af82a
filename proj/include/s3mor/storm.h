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
// Storm and Storm++
//
// Storm keeps T' candidate sets of at most k copies each. Every arriving item
// is offered to each active set in index order: it fills free space, or it
// replaces the slot with the smallest recorded insertion value nu when its
// marginal gain over the union of all candidate sets is at least twice that
// nu. At a visit the active set with the largest gain over everything shown
// so far is emitted and frozen. Memory is at most T' * k copies.
//
// Storm++ runs one Storm per guess g in {delta, 2 delta, ..., ceil(T'/delta)
// delta} and, at each visit, emits the inner output with the largest gain
// over its own previously shown sets.
//

#ifndef S3MOR_STORM_H_
#define S3MOR_STORM_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "s3mor/coverage.h"
#include "s3mor/policy.h"
#include "s3mor/random.h"
#include "s3mor/stream.h"

namespace s3mor {

struct CandidateSlot {
  ItemCopy copy;
  double nu = 0.0;           // gain over the candidate union at insertion
  std::uint64_t order = 0;   // insertion sequence number, for tie-breaks
};

class Storm : public Policy {
 public:
  // Throws std::invalid_argument unless visit_bound >= 1 and k >= 1.
  Storm(int visit_bound, int k, SkipSampling skip = {},
        std::uint64_t tag_space = 0);

  std::optional<OutputSet> Step(const StreamEvent& event) override;

  std::string name() const override { return "storm"; }
  std::uint64_t oracle_calls() const override { return oracle_.calls(); }
  std::size_t stored_copies() const override;
  bool exhausted() const override { return exhausted_; }

  int visit_bound() const { return static_cast<int>(sets_.size()); }
  int k() const { return k_; }

  // Index j (0-based) of A^{j+1}; includes frozen sets.
  const std::vector<std::vector<CandidateSlot>>& candidate_sets() const {
    return sets_;
  }
  // Active set indices, ascending.
  const std::vector<int>& active() const { return active_; }
  const CoverageState& union_state() const { return union_state_; }
  const CoverageState& output_state() const { return output_state_; }
  std::size_t visits_served() const { return visits_; }

 private:
  void OfferToSet(int j, const ItemRef& item);

  int k_;
  SkipSampling skip_;
  Rng rng_;
  CopyTagger tagger_;
  CountingOracle oracle_;
  std::vector<std::vector<CandidateSlot>> sets_;
  std::vector<int> active_;
  CoverageState union_state_;
  CoverageState output_state_;
  std::size_t visits_ = 0;
  std::uint64_t next_order_ = 0;
  bool exhausted_ = false;
};

// {delta, 2 delta, ..., ceil(visit_bound / delta) * delta}.
std::vector<int> GuessSet(int visit_bound, int delta);

class StormPlusPlus : public Policy {
 public:
  StormPlusPlus(int visit_bound, int k, int delta, SkipSampling skip = {});

  std::optional<OutputSet> Step(const StreamEvent& event) override;

  std::string name() const override { return "stormpp"; }
  std::uint64_t oracle_calls() const override;
  std::size_t stored_copies() const override;
  bool exhausted() const override { return exhausted_; }

  const std::vector<int>& guesses() const { return guesses_; }
  const Storm& inner(std::size_t index) const { return *inners_[index]; }

 private:
  std::vector<int> guesses_;
  std::vector<std::unique_ptr<Storm>> inners_;
  CountingOracle oracle_;
  CoverageState output_state_;
  std::size_t visits_ = 0;
  bool exhausted_ = false;
};

}  // namespace s3mor

#endif  // S3MOR_STORM_H_
