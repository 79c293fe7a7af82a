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
// Item streams: file ingestion, synthetic generation, visit schedules and the
// hard-coded regression streams.
//
// Item file:         id<TAB>comma-separated-topic-labels[<TAB>prob]
// Probability file:  id<TAB>prob
// Schedule file:     one 0/1 visit flag per line, aligned with stream order
//
// All generators are pure functions of their inputs and seed.
//

#ifndef S3MOR_STREAM_H_
#define S3MOR_STREAM_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "s3mor/coverage.h"

namespace s3mor {

// The item of a visit event is available to the visit it triggers.
struct StreamEvent {
  ItemRef item;
  bool visit = false;
};

using Stream = std::vector<StreamEvent>;

std::size_t CountVisits(const Stream& stream);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line,
             const std::string& what);

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// An item record before click probabilities are settled.
struct LoadedItem {
  std::string id;
  std::vector<TopicId> topics;
  std::optional<double> click_prob;  // unset unless the file carries it
};

struct ItemTable {
  std::vector<LoadedItem> items;
  // topic_labels[t] is the file label interned to TopicId t.
  std::vector<std::string> topic_labels;
};

ItemTable ParseItems(std::istream& in, const std::string& source_name);
ItemTable LoadItems(const std::filesystem::path& path);

// Keep the probabilities present in the item file.
struct EmbeddedProbs {};
struct ProbFile {
  std::filesystem::path path;
};
struct UniformProbs {
  double lo = 0.0;
  double hi = 0.2;
  std::uint64_t seed = 0;
};
using ProbSource = std::variant<EmbeddedProbs, ProbFile, UniformProbs>;

// Throws std::invalid_argument listing every id left without a probability.
std::vector<ItemRef> AssignProbs(std::span<const LoadedItem> items,
                                 const ProbSource& source);

// Exactly `visits` true entries at positions drawn without replacement.
std::vector<bool> MakeVisitSchedule(std::size_t n, std::size_t visits,
                                    std::uint64_t seed);

std::vector<ItemRef> ShuffleStream(std::vector<ItemRef> items,
                                   std::uint64_t seed);

Stream BuildStream(std::span<const ItemRef> items,
                   const std::vector<bool>& schedule);

struct SyntheticTopics {
  std::size_t topic_universe = 40;
  std::size_t min_topics_per_item = 1;
  std::size_t max_topics_per_item = 3;
};

// Items "0".."n-1" whose topic counts are uniform in [min, max] and whose
// topics are drawn without replacement from the universe.
std::vector<LoadedItem> GenerateItems(std::size_t n,
                                      const SyntheticTopics& topics,
                                      std::uint64_t seed);

struct ItemFileSource {
  std::filesystem::path item_path;
  std::optional<std::filesystem::path> prob_path;
};

struct StreamConfig {
  std::size_t n_items = 1000;  // 0 with a file source: use every record
  std::size_t n_visits = 5;
  std::size_t visit_bound = 50;
  std::size_t k = 10;
  double prob_lo = 0.0;
  double prob_hi = 0.2;
  std::uint64_t seed = 1;  // fixes the synthetic item universe
  std::variant<SyntheticTopics, ItemFileSource> topic_source;

  // T <= T', T <= n_items, lo <= hi within [0, 1], positive k and T.
  void Validate() const;
};

// One simulated user: probabilities, stream order and visit schedule all
// derive from `user_seed`; the synthetic item universe from config.seed.
Stream GenerateStream(const StreamConfig& config, std::uint64_t user_seed);

// "appendix-c3", "thm1-adversarial", "storm-tight" (takes T', also spelled
// "storm-tight(5)"). Throws std::invalid_argument for unknown names.
Stream FixtureStream(std::string_view name, int visit_bound = 0);
std::vector<std::string> FixtureNames();

void WriteItemFile(const std::filesystem::path& path, const Stream& stream);
void WriteSchedule(const std::filesystem::path& path, const Stream& stream);
std::vector<bool> LoadSchedule(const std::filesystem::path& path);

}  // namespace s3mor

#endif  // S3MOR_STREAM_H_
