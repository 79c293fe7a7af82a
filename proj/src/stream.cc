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

#include "s3mor/stream.h"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "s3mor/random.h"

namespace s3mor {
namespace {

std::vector<std::string_view> Split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view Trim(std::string_view text) {
  while (!text.empty() && (text.back() == '\r' || text.back() == ' ')) {
    text.remove_suffix(1);
  }
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  return text;
}

std::optional<double> ParseProb(std::string_view text) {
  text = Trim(text);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    return std::nullopt;
  }
  if (!(value >= 0.0 && value <= 1.0)) return std::nullopt;
  return value;
}

std::ifstream OpenInput(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

std::ofstream OpenOutput(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::unordered_map<std::string, double> LoadProbFile(
    const std::filesystem::path& path) {
  std::ifstream in = OpenInput(path);
  std::unordered_map<std::string, double> probs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto fields = Split(line, '\t');
    if (fields.size() != 2) {
      throw ParseError(path.string(), line_no, "expected id<TAB>prob");
    }
    const auto prob = ParseProb(fields[1]);
    if (!prob) {
      throw ParseError(path.string(), line_no,
                       "malformed probability '" + std::string(fields[1]) +
                           "'");
    }
    probs[std::string(fields[0])] = *prob;
  }
  return probs;
}

}  // namespace

std::size_t CountVisits(const Stream& stream) {
  return static_cast<std::size_t>(
      std::count_if(stream.begin(), stream.end(),
                    [](const StreamEvent& e) { return e.visit; }));
}

ParseError::ParseError(const std::string& source, std::size_t line,
                       const std::string& what)
    : std::runtime_error(fmt::format("{}:{}: {}", source, line, what)),
      line_(line) {}

ItemTable ParseItems(std::istream& in, const std::string& source_name) {
  ItemTable table;
  std::unordered_map<std::string, TopicId> interned;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto fields = Split(line, '\t');
    if (fields.size() < 2 || fields.size() > 3) {
      throw ParseError(source_name, line_no,
                       "expected id<TAB>topics[<TAB>prob]");
    }
    LoadedItem item;
    item.id = std::string(Trim(fields[0]));
    if (item.id.empty()) throw ParseError(source_name, line_no, "empty id");
    if (!seen_ids.insert(item.id).second) {
      throw ParseError(source_name, line_no,
                       "duplicate item id '" + item.id + "'");
    }
    const std::string_view topic_field = Trim(fields[1]);
    if (!topic_field.empty()) {
      for (std::string_view label : Split(topic_field, ',')) {
        label = Trim(label);
        if (label.empty()) {
          throw ParseError(source_name, line_no, "empty topic label");
        }
        auto [it, inserted] = interned.emplace(
            std::string(label), static_cast<TopicId>(interned.size()));
        if (inserted) table.topic_labels.emplace_back(label);
        item.topics.push_back(it->second);
      }
      std::sort(item.topics.begin(), item.topics.end());
      item.topics.erase(std::unique(item.topics.begin(), item.topics.end()),
                        item.topics.end());
    }
    if (fields.size() == 3) {
      item.click_prob = ParseProb(fields[2]);
      if (!item.click_prob) {
        throw ParseError(source_name, line_no,
                         "malformed probability '" + std::string(fields[2]) +
                             "'");
      }
    }
    table.items.push_back(std::move(item));
  }
  return table;
}

ItemTable LoadItems(const std::filesystem::path& path) {
  std::ifstream in = OpenInput(path);
  return ParseItems(in, path.string());
}

std::vector<ItemRef> AssignProbs(std::span<const LoadedItem> items,
                                 const ProbSource& source) {
  std::vector<ItemRef> out;
  out.reserve(items.size());
  if (const auto* uniform = std::get_if<UniformProbs>(&source)) {
    if (!(0.0 <= uniform->lo && uniform->lo <= uniform->hi &&
          uniform->hi <= 1.0)) {
      throw std::invalid_argument(fmt::format(
          "probability range [{}, {}] not within [0, 1]", uniform->lo,
          uniform->hi));
    }
    Rng rng(uniform->seed);
    for (const LoadedItem& item : items) {
      const double p =
          uniform->lo + (uniform->hi - uniform->lo) * rng.UniformDouble();
      out.push_back(MakeItemRef(item.id, item.topics, p));
    }
    return out;
  }

  std::unordered_map<std::string, double> from_file;
  if (const auto* file = std::get_if<ProbFile>(&source)) {
    from_file = LoadProbFile(file->path);
  }
  std::vector<std::string> missing;
  for (const LoadedItem& item : items) {
    std::optional<double> p = item.click_prob;
    if (std::holds_alternative<ProbFile>(source)) {
      const auto it = from_file.find(item.id);
      p = it == from_file.end() ? std::nullopt : std::optional(it->second);
    }
    if (!p) {
      missing.push_back(item.id);
      continue;
    }
    out.push_back(MakeItemRef(item.id, item.topics, *p));
  }
  if (!missing.empty()) {
    throw std::invalid_argument(
        fmt::format("no click probability for ids: {}",
                    fmt::join(missing.begin(), missing.end(), ", ")));
  }
  return out;
}

std::vector<bool> MakeVisitSchedule(std::size_t n, std::size_t visits,
                                    std::uint64_t seed) {
  if (visits < 1 || visits > n) {
    throw std::invalid_argument(fmt::format(
        "visit schedule needs 1 <= T <= n (T = {}, n = {})", visits, n));
  }
  std::vector<std::size_t> positions(n);
  std::iota(positions.begin(), positions.end(), 0);
  Rng rng(seed);
  std::vector<bool> schedule(n, false);
  for (std::size_t i = 0; i < visits; ++i) {
    const std::size_t j = i + rng.UniformInt(n - i);
    std::swap(positions[i], positions[j]);
    schedule[positions[i]] = true;
  }
  return schedule;
}

std::vector<ItemRef> ShuffleStream(std::vector<ItemRef> items,
                                   std::uint64_t seed) {
  Rng rng(seed);
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[rng.UniformInt(i)]);
  }
  return items;
}

Stream BuildStream(std::span<const ItemRef> items,
                   const std::vector<bool>& schedule) {
  if (items.size() != schedule.size()) {
    throw std::invalid_argument(
        fmt::format("schedule length {} does not match {} items",
                    schedule.size(), items.size()));
  }
  Stream stream;
  stream.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    stream.push_back({items[i], schedule[i]});
  }
  return stream;
}

std::vector<LoadedItem> GenerateItems(std::size_t n,
                                      const SyntheticTopics& topics,
                                      std::uint64_t seed) {
  if (topics.min_topics_per_item > topics.max_topics_per_item ||
      topics.max_topics_per_item > topics.topic_universe) {
    throw std::invalid_argument(fmt::format(
        "topics per item [{}, {}] invalid for a universe of {}",
        topics.min_topics_per_item, topics.max_topics_per_item,
        topics.topic_universe));
  }
  Rng rng(seed);
  std::vector<TopicId> universe(topics.topic_universe);
  std::iota(universe.begin(), universe.end(), 0);
  std::vector<LoadedItem> items(n);
  const std::size_t span =
      topics.max_topics_per_item - topics.min_topics_per_item + 1;
  for (std::size_t i = 0; i < n; ++i) {
    items[i].id = std::to_string(i);
    const std::size_t count = topics.min_topics_per_item + rng.UniformInt(span);
    for (std::size_t t = 0; t < count; ++t) {
      const std::size_t j = t + rng.UniformInt(universe.size() - t);
      std::swap(universe[t], universe[j]);
      items[i].topics.push_back(universe[t]);
    }
    std::sort(items[i].topics.begin(), items[i].topics.end());
  }
  return items;
}

void StreamConfig::Validate() const {
  if (k < 1) throw std::invalid_argument("budget k must be positive");
  if (n_visits < 1) throw std::invalid_argument("T must be positive");
  if (visit_bound < n_visits) {
    throw std::invalid_argument(fmt::format(
        "visit bound T' = {} is below T = {}", visit_bound, n_visits));
  }
  if (std::holds_alternative<SyntheticTopics>(topic_source) &&
      n_visits > n_items) {
    throw std::invalid_argument(fmt::format(
        "T = {} exceeds the stream length {}", n_visits, n_items));
  }
  if (!(0.0 <= prob_lo && prob_lo <= prob_hi && prob_hi <= 1.0)) {
    throw std::invalid_argument(fmt::format(
        "probability range [{}, {}] not within [0, 1]", prob_lo, prob_hi));
  }
}

Stream GenerateStream(const StreamConfig& config, std::uint64_t user_seed) {
  config.Validate();
  std::vector<LoadedItem> loaded;
  std::vector<ItemRef> items;
  const UniformProbs uniform{config.prob_lo, config.prob_hi,
                             DeriveSeed(user_seed, 1)};
  if (const auto* synth = std::get_if<SyntheticTopics>(&config.topic_source)) {
    loaded = GenerateItems(config.n_items, *synth, DeriveSeed(config.seed, 0));
    items = AssignProbs(loaded, uniform);
  } else {
    const auto& files = std::get<ItemFileSource>(config.topic_source);
    loaded = LoadItems(files.item_path).items;
    if (files.prob_path) {
      items = AssignProbs(loaded, ProbFile{*files.prob_path});
    } else if (std::all_of(loaded.begin(), loaded.end(),
                           [](const LoadedItem& i) {
                             return i.click_prob.has_value();
                           })) {
      items = AssignProbs(loaded, EmbeddedProbs{});
    } else {
      items = AssignProbs(loaded, uniform);
    }
  }
  items = ShuffleStream(std::move(items), DeriveSeed(user_seed, 2));
  if (config.n_items > 0 && config.n_items < items.size()) {
    items.resize(config.n_items);
  }
  const auto schedule = MakeVisitSchedule(items.size(), config.n_visits,
                                          DeriveSeed(user_seed, 3));
  return BuildStream(items, schedule);
}

Stream FixtureStream(std::string_view name, int visit_bound) {
  if (name.starts_with("storm-tight(") && name.ends_with(")")) {
    const std::string_view digits = name.substr(12, name.size() - 13);
    int parsed = 0;
    const auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), parsed);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) {
      throw std::invalid_argument("bad fixture name '" + std::string(name) +
                                  "'");
    }
    return FixtureStream("storm-tight", parsed);
  }
  auto event = [](std::string id, std::vector<TopicId> topics, double p,
                  bool visit) {
    return StreamEvent{MakeItemRef(std::move(id), std::move(topics), p),
                       visit};
  };
  if (name == "appendix-c3") {
    return {event("V1", {1}, 1.0, false), event("V2", {2}, 1.0, false),
            event("V3", {3, 4}, 0.9, true), event("V4", {5, 6}, 1.0, true)};
  }
  if (name == "thm1-adversarial") {
    // The adversary completes item 3 with the topics of the first presented
    // item; deterministic greedy with earliest-index ties presents V1.
    return {event("V1", {1, 2}, 1.0, false), event("V2", {3, 4}, 1.0, true),
            event("V3", {1, 2}, 1.0, true)};
  }
  if (name == "storm-tight") {
    if (visit_bound < 1) {
      throw std::invalid_argument("storm-tight needs T' >= 1");
    }
    Stream stream;
    std::vector<TopicId> all;
    for (int t = 1; t <= visit_bound; ++t) {
      stream.push_back(event(fmt::format("V{}", t),
                             {static_cast<TopicId>(t)}, 1.0, false));
      all.push_back(static_cast<TopicId>(t));
    }
    stream.push_back(
        event(fmt::format("V{}", visit_bound + 1), std::move(all), 1.0, true));
    return stream;
  }
  throw std::invalid_argument("unknown fixture '" + std::string(name) + "'");
}

std::vector<std::string> FixtureNames() {
  return {"appendix-c3", "storm-tight", "thm1-adversarial"};
}

void WriteItemFile(const std::filesystem::path& path, const Stream& stream) {
  std::ofstream out = OpenOutput(path);
  for (const StreamEvent& event : stream) {
    out << event.item->id << '\t'
        << fmt::format("{}", fmt::join(event.item->topics, ",")) << '\t'
        << fmt::format("{:.17g}", event.item->click_prob) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void WriteSchedule(const std::filesystem::path& path, const Stream& stream) {
  std::ofstream out = OpenOutput(path);
  for (const StreamEvent& event : stream) out << (event.visit ? 1 : 0) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<bool> LoadSchedule(const std::filesystem::path& path) {
  std::ifstream in = OpenInput(path);
  std::vector<bool> schedule;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view flag = Trim(line);
    if (flag.empty()) continue;
    if (flag != "0" && flag != "1") {
      throw ParseError(path.string(), line_no, "expected 0 or 1");
    }
    schedule.push_back(flag == "1");
  }
  return schedule;
}

}  // namespace s3mor
