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
// Expected topic coverage
//
// f(S) = sum over topics j of (1 - prod_{i in S, j in V_i} (1 - p_i)), where
// S is a multiset of item copies. Every copy is an independent click trial.
//

#ifndef S3MOR_COVERAGE_H_
#define S3MOR_COVERAGE_H_

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace s3mor {

// Topic ids index a dense table; loaders intern arbitrary labels to 0..d-1.
using TopicId = std::uint32_t;

// Thrown when an operation's precondition is violated by the caller, e.g.
// removing an item that was never applied.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Item {
  std::string id;
  std::vector<TopicId> topics;  // sorted, no duplicates
  double click_prob = 0.0;
};

// Validates the probability and normalizes topics into a sorted set.
Item MakeItem(std::string id, std::vector<TopicId> topics, double click_prob);

// Items live in shared storage; per-user structures hold references to them.
using ItemRef = std::shared_ptr<const Item>;

ItemRef MakeItemRef(std::string id, std::vector<TopicId> topics,
                    double click_prob);

// One presentation (or candidate placement) of an item. Two copies of the
// same item are distinct contributors to f.
struct ItemCopy {
  ItemRef item;
  std::uint64_t copy_tag = 0;

  friend bool operator==(const ItemCopy& a, const ItemCopy& b) {
    return a.copy_tag == b.copy_tag && a.item->id == b.item->id;
  }
};

struct SurvivalCell {
  std::int64_t zero_count = 0;  // contributors with click_prob == 1
  double log_survival = 0.0;    // sum of log(1 - p) over the others
  std::int64_t contributor_count = 0;

  double Survival() const;
};

// Per-topic survival accounting. Value, marginal gains, additions and
// removals all cost O(|topics of the item|).
//
// Not thread-safe for writers; const methods may be shared by readers.
class CoverageState {
 public:
  CoverageState() = default;

  double Value() const { return value_; }

  // f(item | state). Does not mutate.
  double MarginalGain(const Item& item) const;

  // f(items | state), aggregating all copies analytically.
  double MarginalGain(std::span<const ItemCopy> items) const;

  void Apply(const Item& item);

  // Inverse of Apply. Throws ContractViolation (naming the topic) and leaves
  // the state untouched if some topic of the item has no matching
  // contributor.
  void Remove(const Item& item);

  // Survival probability of a topic; 1 for topics never touched.
  double Survival(TopicId topic) const;

  // Null when the topic has never been touched.
  const SurvivalCell* Cell(TopicId topic) const;

  // Number of touched topics (the observed universe size d).
  std::size_t num_topics() const { return num_touched_; }

 private:
  SurvivalCell& MutableCell(TopicId topic);

  std::vector<SurvivalCell> cells_;
  std::vector<bool> touched_;
  std::size_t num_touched_ = 0;
  double value_ = 0.0;
};

// Builds a fresh state by folding Apply over the copies. Serves as the
// reference against which incremental states are checked.
CoverageState RecomputeFromScratch(std::span<const ItemCopy> items);

}  // namespace s3mor

#endif  // S3MOR_COVERAGE_H_
