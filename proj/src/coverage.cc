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

#include "s3mor/coverage.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace s3mor {

Item MakeItem(std::string id, std::vector<TopicId> topics, double click_prob) {
  if (!(click_prob >= 0.0 && click_prob <= 1.0)) {
    throw std::invalid_argument("item '" + id + "': click probability " +
                                std::to_string(click_prob) +
                                " outside [0, 1]");
  }
  std::sort(topics.begin(), topics.end());
  topics.erase(std::unique(topics.begin(), topics.end()), topics.end());
  return Item{std::move(id), std::move(topics), click_prob};
}

ItemRef MakeItemRef(std::string id, std::vector<TopicId> topics,
                    double click_prob) {
  return std::make_shared<const Item>(
      MakeItem(std::move(id), std::move(topics), click_prob));
}

double SurvivalCell::Survival() const {
  if (zero_count > 0) return 0.0;
  return std::exp(log_survival);
}

double CoverageState::Survival(TopicId topic) const {
  if (topic >= cells_.size()) return 1.0;
  return cells_[topic].Survival();
}

const SurvivalCell* CoverageState::Cell(TopicId topic) const {
  if (topic >= cells_.size() || !touched_[topic]) return nullptr;
  return &cells_[topic];
}

SurvivalCell& CoverageState::MutableCell(TopicId topic) {
  if (topic >= cells_.size()) {
    cells_.resize(static_cast<std::size_t>(topic) + 1);
    touched_.resize(static_cast<std::size_t>(topic) + 1, false);
  }
  if (!touched_[topic]) {
    touched_[topic] = true;
    ++num_touched_;
  }
  return cells_[topic];
}

double CoverageState::MarginalGain(const Item& item) const {
  double gain = 0.0;
  for (TopicId topic : item.topics) {
    gain += item.click_prob * Survival(topic);
  }
  return gain;
}

double CoverageState::MarginalGain(std::span<const ItemCopy> items) const {
  std::vector<std::pair<TopicId, double>> factors;
  for (const ItemCopy& copy : items) {
    for (TopicId topic : copy.item->topics) {
      factors.emplace_back(topic, copy.item->click_prob);
    }
  }
  std::sort(factors.begin(), factors.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double gain = 0.0;
  for (std::size_t i = 0; i < factors.size();) {
    const TopicId topic = factors[i].first;
    double miss = 1.0;
    for (; i < factors.size() && factors[i].first == topic; ++i) {
      miss *= factors[i].second == 1.0 ? 0.0 : 1.0 - factors[i].second;
    }
    gain += Survival(topic) * (1.0 - miss);
  }
  return gain;
}

void CoverageState::Apply(const Item& item) {
  const double p = item.click_prob;
  for (TopicId topic : item.topics) {
    SurvivalCell& cell = MutableCell(topic);
    value_ += p * cell.Survival();
    ++cell.contributor_count;
    if (p == 1.0) {
      ++cell.zero_count;
    } else {
      cell.log_survival += std::log1p(-p);
    }
  }
}

void CoverageState::Remove(const Item& item) {
  const double p = item.click_prob;
  for (TopicId topic : item.topics) {
    const SurvivalCell* cell = Cell(topic);
    const bool underflow =
        cell == nullptr || cell->contributor_count <= 0 ||
        (p == 1.0 ? cell->zero_count <= 0
                  : cell->contributor_count - cell->zero_count <= 0);
    if (underflow) {
      throw ContractViolation("remove of item '" + item.id +
                              "' underflows topic " + std::to_string(topic));
    }
  }
  for (TopicId topic : item.topics) {
    SurvivalCell& cell = cells_[topic];
    const double before = cell.Survival();
    --cell.contributor_count;
    if (p == 1.0) {
      --cell.zero_count;
    } else {
      cell.log_survival -= std::log1p(-p);
    }
    // No log terms left: reset so the cell is exactly neutral again.
    if (cell.contributor_count == cell.zero_count) cell.log_survival = 0.0;
    cell.log_survival = std::min(cell.log_survival, 0.0);
    value_ -= cell.Survival() - before;
  }
}

CoverageState RecomputeFromScratch(std::span<const ItemCopy> items) {
  CoverageState state;
  for (const ItemCopy& copy : items) state.Apply(*copy.item);
  return state;
}

}  // namespace s3mor
