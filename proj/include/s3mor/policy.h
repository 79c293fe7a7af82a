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
// Online serving policies
//
// A policy consumes stream events one at a time and, at every visit event,
// irrevocably returns up to k item copies to present.
//

#ifndef S3MOR_POLICY_H_
#define S3MOR_POLICY_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "s3mor/coverage.h"
#include "s3mor/stream.h"

namespace s3mor {

// Value snapshot of what was shown at one visit.
class OutputSet {
 public:
  OutputSet(std::size_t visit_index, std::vector<ItemCopy> items,
            double gain_at_emission)
      : visit_index_(visit_index),
        items_(std::move(items)),
        gain_at_emission_(gain_at_emission) {}

  std::size_t visit_index() const { return visit_index_; }
  const std::vector<ItemCopy>& items() const { return items_; }
  double gain_at_emission() const { return gain_at_emission_; }

 private:
  std::size_t visit_index_;
  std::vector<ItemCopy> items_;
  double gain_at_emission_;
};

// Routes every objective evaluation a policy makes and counts it. Recorded
// insertion values are memoized oracle answers; consulting one is charged
// as a call so that the count matches the T'k-per-item accounting of the
// swap rule.
class CountingOracle {
 public:
  double Value(const CoverageState& state) {
    ++calls_;
    return state.Value();
  }
  double Gain(const CoverageState& state, const Item& item) {
    ++calls_;
    return state.MarginalGain(item);
  }
  double Gain(const CoverageState& state, std::span<const ItemCopy> items) {
    ++calls_;
    return state.MarginalGain(items);
  }
  void ChargeRecordedValues(std::size_t count) { calls_ += count; }

  std::uint64_t calls() const { return calls_; }

 private:
  std::uint64_t calls_ = 0;
};

// Item-level Bernoulli skipping: each (item, candidate set) consideration is
// ignored with probability `prob`.
struct SkipSampling {
  bool enabled = false;
  double prob = 2.0 / 3.0;
  std::uint64_t seed = 0;
};

class Policy {
 public:
  virtual ~Policy() = default;

  // Returns an OutputSet iff event.visit.
  virtual std::optional<OutputSet> Step(const StreamEvent& event) = 0;

  virtual std::string name() const = 0;
  virtual std::uint64_t oracle_calls() const = 0;

  // Item copies currently held in per-user storage.
  virtual std::size_t stored_copies() const = 0;

  // True once a visit arrived that the policy had no capacity left to serve.
  virtual bool exhausted() const { return false; }
};

// Allocates copy tags; `tag_space` keeps tags of sibling instances apart.
class CopyTagger {
 public:
  explicit CopyTagger(std::uint64_t tag_space = 0) : next_(tag_space << 40) {}
  ItemCopy Tag(const ItemRef& item) { return ItemCopy{item, next_++}; }

 private:
  std::uint64_t next_;
};

}  // namespace s3mor

#endif  // S3MOR_POLICY_H_
