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

#include "s3mor/baselines.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace s3mor {

SieveStreamingPP::SieveStreamingPP(int k, double epsilon)
    : k_(k), epsilon_(epsilon) {
  if (k < 1) throw std::invalid_argument("sievepp needs k >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("sievepp needs eps > 0");
}

double SieveStreamingPP::Threshold(int exponent) const {
  return std::pow(1.0 + epsilon_, exponent);
}

std::size_t SieveStreamingPP::stored_copies() const {
  std::size_t total = shown_copies_;
  for (const auto& [exponent, sieve] : sieves_) total += sieve.items.size();
  return total;
}

std::vector<double> SieveStreamingPP::thresholds() const {
  std::vector<double> out;
  for (const auto& [exponent, sieve] : sieves_) {
    out.push_back(Threshold(exponent));
  }
  return out;
}

std::optional<OutputSet> SieveStreamingPP::Step(const StreamEvent& event) {
  const Item& item = *event.item;
  max_singleton_ = std::max(max_singleton_, oracle_.Gain(output_state_, item));
  if (max_singleton_ > 0.0) {
    const double log_base = std::log1p(epsilon_);
    const double tau_min =
        std::max(lower_bound_, max_singleton_) / (2.0 * k_);
    const int lo = static_cast<int>(
        std::ceil(std::log(tau_min / (1.0 + epsilon_)) / log_base - 1e-12));
    const int hi =
        static_cast<int>(std::floor(std::log(max_singleton_) / log_base +
                                    1e-12));
    sieves_.erase(sieves_.begin(), sieves_.lower_bound(lo));
    for (int h = lo; h <= hi; ++h) {
      if (!sieves_.contains(h)) sieves_.emplace(h, Sieve{{}, output_state_, 0});
    }
    for (auto& [exponent, sieve] : sieves_) {
      if (static_cast<int>(sieve.items.size()) >= k_) continue;
      const double gain = oracle_.Gain(sieve.state, item);
      if (gain >= Threshold(exponent)) {
        sieve.items.push_back(tagger_.Tag(event.item));
        sieve.state.Apply(item);
        sieve.value += gain;
        lower_bound_ = std::max(lower_bound_, sieve.value);
      }
    }
  }
  if (!event.visit) return std::nullopt;

  const Sieve* best = nullptr;
  for (const auto& [exponent, sieve] : sieves_) {
    if (best == nullptr || sieve.value > best->value) best = &sieve;
  }
  std::vector<ItemCopy> shown;
  double gain = 0.0;
  if (best != nullptr) {
    shown = best->items;
    gain = best->value;
  }
  for (const ItemCopy& copy : shown) output_state_.Apply(*copy.item);
  shown_copies_ += shown.size();
  sieves_.clear();
  max_singleton_ = 0.0;
  lower_bound_ = 0.0;
  return OutputSet(visits_++, std::move(shown), gain);
}

PreemptionStreaming::PreemptionStreaming(int k, double c) : k_(k), c_(c) {
  if (k < 1) throw std::invalid_argument("preemption needs k >= 1");
  if (!(c >= 0.0)) throw std::invalid_argument("preemption needs c >= 0");
}

std::optional<OutputSet> PreemptionStreaming::Step(const StreamEvent& event) {
  const Item& item = *event.item;
  const double gain = oracle_.Gain(segment_state_, item);
  if (static_cast<int>(held_.size()) < k_) {
    held_.push_back({tagger_.Tag(event.item), gain, next_order_++});
    segment_state_.Apply(item);
  } else {
    auto weakest = held_.begin();
    for (auto it = held_.begin(); it != held_.end(); ++it) {
      if (it->nu < weakest->nu ||
          (it->nu == weakest->nu && it->order < weakest->order)) {
        weakest = it;
      }
    }
    oracle_.ChargeRecordedValues(held_.size());
    if (gain > (1.0 + c_) * weakest->nu) {
      segment_state_.Remove(*weakest->copy.item);
      *weakest = {tagger_.Tag(event.item), gain, next_order_++};
      segment_state_.Apply(item);
    }
  }
  if (!event.visit) return std::nullopt;

  std::vector<ItemCopy> shown;
  for (const CandidateSlot& slot : held_) shown.push_back(slot.copy);
  const double shown_gain = oracle_.Gain(output_state_, shown);
  for (const ItemCopy& copy : shown) output_state_.Apply(*copy.item);
  shown_copies_ += shown.size();
  held_.clear();
  segment_state_ = output_state_;
  return OutputSet(visits_++, std::move(shown), shown_gain);
}

}  // namespace s3mor
