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

#include "s3mor/lmgreedy.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace s3mor {

LmGreedy::LmGreedy(int k, std::size_t sample_size, std::uint64_t seed)
    : k_(k), sample_size_(sample_size), rng_(seed) {
  if (k < 1) throw std::invalid_argument("lmgreedy needs k >= 1");
}

std::optional<OutputSet> LmGreedy::Step(const StreamEvent& event) {
  pool_.push_back(event.item);
  if (!event.visit) return std::nullopt;

  // Indices into pool_ still eligible for this slate, in arrival order.
  std::vector<std::size_t> remaining(pool_.size());
  std::iota(remaining.begin(), remaining.end(), 0);
  std::vector<ItemCopy> slate;
  double total_gain = 0.0;
  for (int step = 0; step < k_ && !remaining.empty(); ++step) {
    std::size_t scan = remaining.size();
    if (sample_size_ > 0 && sample_size_ < remaining.size()) {
      // Partial Fisher-Yates moves the sample to the front; sort it back to
      // arrival order so ties still favour the earliest item.
      scan = sample_size_;
      for (std::size_t i = 0; i < scan; ++i) {
        std::swap(remaining[i],
                  remaining[i + rng_.UniformInt(remaining.size() - i)]);
      }
      std::sort(remaining.begin(),
                remaining.begin() + static_cast<std::ptrdiff_t>(scan));
    }
    std::size_t best = 0;
    double best_gain = -1.0;
    for (std::size_t r = 0; r < scan; ++r) {
      const double gain = oracle_.Gain(output_state_, *pool_[remaining[r]]);
      if (gain > best_gain ||
          (gain == best_gain && remaining[r] < remaining[best])) {
        best_gain = gain;
        best = r;
      }
    }
    const ItemRef& chosen = pool_[remaining[best]];
    output_state_.Apply(*chosen);
    slate.push_back(tagger_.Tag(chosen));
    total_gain += best_gain;
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
    if (sample_size_ > 0) std::sort(remaining.begin(), remaining.end());
  }
  shown_copies_ += slate.size();
  return OutputSet(visits_++, std::move(slate), total_gain);
}

}  // namespace s3mor
