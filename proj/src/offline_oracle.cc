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

#include "s3mor/offline_oracle.h"

#include <fmt/format.h>

#include <cmath>
#include <limits>

#include "s3mor/coverage.h"

namespace s3mor {
namespace {

std::vector<std::size_t> VisitPositions(const Stream& stream) {
  std::vector<std::size_t> positions;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (stream[i].visit) positions.push_back(i);
  }
  return positions;
}

class Enumerator {
 public:
  Enumerator(const Stream& stream, int k)
      : stream_(stream), k_(k), visits_(VisitPositions(stream)) {
    current_.per_visit.resize(visits_.size());
  }

  OptResult Run() {
    best_.value = -1.0;
    Visit(0);
    return best_;
  }

 private:
  void Visit(std::size_t t) {
    if (t == visits_.size()) {
      // Strict improvement keeps the lexicographically first maximizer.
      if (state_.Value() > best_.value + 1e-12) {
        best_.value = state_.Value();
        best_.assignment = current_;
      }
      return;
    }
    Extend(t, 0);
  }

  // Emits the current subset of visit t, then every extension by a larger
  // index; this walks subsets in lexicographic order.
  void Extend(std::size_t t, std::size_t next) {
    Visit(t + 1);
    std::vector<std::size_t>& subset = current_.per_visit[t];
    if (static_cast<int>(subset.size()) == k_) return;
    for (std::size_t i = next; i <= visits_[t]; ++i) {
      subset.push_back(i);
      state_.Apply(*stream_[i].item);
      Extend(t, i + 1);
      state_.Remove(*stream_[i].item);
      subset.pop_back();
    }
  }

  const Stream& stream_;
  int k_;
  std::vector<std::size_t> visits_;
  CoverageState state_;
  FeasibleAssignment current_;
  OptResult best_;
};

}  // namespace

SearchSpaceTooLarge::SearchSpaceTooLarge(double combinations)
    : std::runtime_error(fmt::format(
          "brute-force search space of {:.6g} assignments exceeds the limit",
          combinations)),
      combinations_(combinations) {}

bool FeasibleAssignment::IsFeasible(const Stream& stream, int k) const {
  const auto visits = VisitPositions(stream);
  if (per_visit.size() != visits.size()) return false;
  for (std::size_t t = 0; t < visits.size(); ++t) {
    if (static_cast<int>(per_visit[t].size()) > k) return false;
    for (std::size_t i = 0; i < per_visit[t].size(); ++i) {
      if (per_visit[t][i] > visits[t]) return false;
      if (i > 0 && per_visit[t][i] <= per_visit[t][i - 1]) return false;
    }
  }
  return true;
}

double CountAssignments(const Stream& stream, int k) {
  double total = 1.0;
  for (std::size_t position : VisitPositions(stream)) {
    const double available = static_cast<double>(position + 1);
    double subsets = 1.0;
    double binomial = 1.0;
    for (int s = 1; s <= k && s <= available; ++s) {
      binomial = binomial * (available - s + 1) / s;
      subsets += binomial;
    }
    total *= subsets;
    if (!std::isfinite(total)) return std::numeric_limits<double>::infinity();
  }
  return total;
}

OptResult BruteForceOpt(const Stream& stream, int k,
                        double max_combinations) {
  if (k < 1) throw std::invalid_argument("brute force needs k >= 1");
  const double combinations = CountAssignments(stream, k);
  if (combinations > max_combinations) {
    throw SearchSpaceTooLarge(combinations);
  }
  return Enumerator(stream, k).Run();
}

double AssignmentValue(const Stream& stream,
                       const FeasibleAssignment& assignment) {
  std::vector<ItemCopy> copies;
  std::uint64_t tag = 0;
  for (const auto& subset : assignment.per_visit) {
    for (std::size_t position : subset) {
      copies.push_back({stream.at(position).item, tag++});
    }
  }
  return RecomputeFromScratch(copies).Value();
}

RatioCheck CheckRatio(double policy_value, double opt_value, double bound) {
  if (!(opt_value > 0.0)) {
    throw std::invalid_argument("ratio check needs a positive optimum");
  }
  const double margin = policy_value - bound * opt_value;
  return RatioCheck{margin >= -1e-9, margin};
}

}  // namespace s3mor
