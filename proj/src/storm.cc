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

#include "s3mor/storm.h"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace s3mor {

Storm::Storm(int visit_bound, int k, SkipSampling skip,
             std::uint64_t tag_space)
    : k_(k), skip_(skip), rng_(skip.seed), tagger_(tag_space) {
  if (visit_bound < 1 || k < 1) {
    throw std::invalid_argument("storm needs T' >= 1 and k >= 1 (got T' = " +
                                std::to_string(visit_bound) +
                                ", k = " + std::to_string(k) + ")");
  }
  sets_.resize(static_cast<std::size_t>(visit_bound));
  active_.reserve(sets_.size());
  for (int j = 0; j < visit_bound; ++j) active_.push_back(j);
}

std::size_t Storm::stored_copies() const {
  std::size_t total = 0;
  for (const auto& set : sets_) total += set.size();
  return total;
}

void Storm::OfferToSet(int j, const ItemRef& item) {
  std::vector<CandidateSlot>& set = sets_[static_cast<std::size_t>(j)];
  if (static_cast<int>(set.size()) < k_) {
    const double gain = oracle_.Gain(union_state_, *item);
    set.push_back({tagger_.Tag(item), gain, next_order_++});
    union_state_.Apply(*item);
    return;
  }
  auto weakest = set.begin();
  for (auto it = set.begin(); it != set.end(); ++it) {
    if (it->nu < weakest->nu ||
        (it->nu == weakest->nu && it->order < weakest->order)) {
      weakest = it;
    }
  }
  oracle_.ChargeRecordedValues(set.size());
  const double gain = oracle_.Gain(union_state_, *item);
  if (gain >= 2.0 * weakest->nu) {
    union_state_.Remove(*weakest->copy.item);
    *weakest = {tagger_.Tag(item), gain, next_order_++};
    union_state_.Apply(*item);
  }
}

std::optional<OutputSet> Storm::Step(const StreamEvent& event) {
  for (int j : active_) {
    if (skip_.enabled && rng_.Bernoulli(skip_.prob)) continue;
    OfferToSet(j, event.item);
  }
  if (!event.visit) return std::nullopt;

  const std::size_t visit_index = visits_++;
  if (active_.empty()) {
    exhausted_ = true;
    return OutputSet(visit_index, {}, 0.0);
  }
  std::size_t best = 0;
  double best_gain = -1.0;
  std::vector<ItemCopy> copies;
  for (std::size_t a = 0; a < active_.size(); ++a) {
    copies.clear();
    for (const CandidateSlot& slot : sets_[active_[a]]) {
      copies.push_back(slot.copy);
    }
    const double gain = oracle_.Gain(output_state_, copies);
    if (gain > best_gain) {
      best_gain = gain;
      best = a;
    }
  }
  const int chosen = active_[best];
  active_.erase(active_.begin() + static_cast<std::ptrdiff_t>(best));
  std::vector<ItemCopy> shown;
  for (const CandidateSlot& slot : sets_[chosen]) {
    shown.push_back(slot.copy);
    output_state_.Apply(*slot.copy.item);
  }
  return OutputSet(visit_index, std::move(shown), best_gain);
}

std::vector<int> GuessSet(int visit_bound, int delta) {
  if (visit_bound < 1 || delta < 1) {
    throw std::invalid_argument("guess set needs T' >= 1 and delta >= 1");
  }
  std::vector<int> guesses;
  const int count = (visit_bound + delta - 1) / delta;
  for (int i = 1; i <= count; ++i) guesses.push_back(i * delta);
  return guesses;
}

StormPlusPlus::StormPlusPlus(int visit_bound, int k, int delta,
                             SkipSampling skip)
    : guesses_(GuessSet(visit_bound, delta)) {
  for (std::size_t i = 0; i < guesses_.size(); ++i) {
    SkipSampling inner_skip = skip;
    inner_skip.seed = DeriveSeed(skip.seed, i);
    inners_.push_back(std::make_unique<Storm>(guesses_[i], k, inner_skip,
                                              /*tag_space=*/i + 1));
  }
}

std::uint64_t StormPlusPlus::oracle_calls() const {
  std::uint64_t total = oracle_.calls();
  for (const auto& inner : inners_) total += inner->oracle_calls();
  return total;
}

std::size_t StormPlusPlus::stored_copies() const {
  std::size_t total = 0;
  for (const auto& inner : inners_) total += inner->stored_copies();
  return total;
}

std::optional<OutputSet> StormPlusPlus::Step(const StreamEvent& event) {
  // Inner item phases all finish before aggregation.
  std::vector<std::optional<OutputSet>> inner_outputs;
  inner_outputs.reserve(inners_.size());
  for (auto& inner : inners_) inner_outputs.push_back(inner->Step(event));
  if (!event.visit) return std::nullopt;

  const std::size_t visit_index = visits_++;
  std::size_t best = 0;
  double best_gain = -1.0;
  bool all_exhausted = true;
  for (std::size_t g = 0; g < inners_.size(); ++g) {
    const OutputSet& candidate = *inner_outputs[g];
    if (!inners_[g]->exhausted()) all_exhausted = false;
    const double gain = oracle_.Gain(output_state_, candidate.items());
    if (gain > best_gain) {
      best_gain = gain;
      best = g;
    }
  }
  if (all_exhausted) exhausted_ = true;
  std::vector<ItemCopy> shown = inner_outputs[best]->items();
  for (const ItemCopy& copy : shown) output_state_.Apply(*copy.item);
  return OutputSet(visit_index, std::move(shown), best_gain);
}

}  // namespace s3mor
