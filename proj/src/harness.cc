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

#include "s3mor/harness.h"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "s3mor/coverage.h"
#include "s3mor/random.h"

namespace s3mor {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string Trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return "";
  const auto last = text.find_last_not_of(" \t\r");
  return std::string(text.substr(first, last - first + 1));
}

template <typename T>
T ParseNumber(const std::string& text, const std::string& what) {
  T value{};
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument(
        fmt::format("{}: cannot parse '{}' as a number", what, text));
  }
  return value;
}

// 12 significant digits, then back to double so JSON matches CSV.
double Round12(double value) {
  return std::stod(fmt::format("{:.12g}", value));
}

std::string Num(double value) { return fmt::format("{:.12g}", value); }

const std::set<std::string>& IntegerSweepParams() {
  static const auto* const params = new std::set<std::string>{
      "k", "T", "delta_T", "n_items", "delta", "sample", "tprime"};
  return *params;
}

const std::set<std::string>& StreamSweepParams() {
  static const auto* const params = new std::set<std::string>{
      "k", "T", "delta_T", "n_items", "prob_lo", "prob_hi"};
  return *params;
}

bool IsPolicyParam(const std::string& param) {
  for (const std::string& name : PolicyNames()) {
    if (PolicyAcceptsParam(name, param)) return true;
  }
  return false;
}

struct Accumulator {
  std::vector<double> coverage;
  double oracle_calls = 0;
  double peak_copies = 0;
  double wall_time = 0;
  std::size_t exhausted = 0;
};

}  // namespace

RunReport RunPolicy(const Stream& stream, Policy& policy, bool record_timing) {
  RunReport report;
  report.policy = policy.name();
  const auto start = std::chrono::steady_clock::now();
  for (const StreamEvent& event : stream) {
    if (auto output = policy.Step(event)) {
      report.outputs.push_back(std::move(*output));
    }
    report.peak_copies = std::max(report.peak_copies, policy.stored_copies());
  }
  if (record_timing) {
    report.wall_time_s = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  }
  std::vector<ItemCopy> shown;
  for (const OutputSet& output : report.outputs) {
    shown.insert(shown.end(), output.items().begin(), output.items().end());
  }
  report.total_coverage = RecomputeFromScratch(shown).Value();
  report.oracle_calls = policy.oracle_calls();
  report.exhausted = policy.exhausted();
  return report;
}

RunReport RunOne(const Stream& stream, const PolicySpec& spec,
                 const RunContext& context, bool record_timing) {
  auto policy = MakePolicy(spec, context);
  RunReport report = RunPolicy(stream, *policy, record_timing);
  report.policy = spec.Label();
  return report;
}

void ExperimentConfig::Validate() {
  stream.visit_bound = stream.n_visits + delta_visits;
  stream.Validate();
  if (repetitions < 1) {
    throw std::invalid_argument("repetitions must be positive");
  }
  if (policies.empty()) throw std::invalid_argument("no policy configured");
  std::set<std::string> labels;
  for (const PolicySpec& spec : policies) {
    ValidatePolicySpec(spec);
    if (!labels.insert(spec.Label()).second) {
      throw std::invalid_argument("duplicate policy " + spec.Label());
    }
  }
  ParseReportFormat(format);
  if (sweep) {
    if (!StreamSweepParams().contains(sweep->param) &&
        !IsPolicyParam(sweep->param)) {
      throw std::invalid_argument("cannot sweep unknown parameter '" +
                                  sweep->param + "'");
    }
    if (sweep->values.empty()) {
      throw std::invalid_argument("sweep has no values");
    }
    for (double value : sweep->values) {
      if (IntegerSweepParams().contains(sweep->param) &&
          (value != std::floor(value) || value < 0)) {
        throw std::invalid_argument(fmt::format(
            "sweep value {} is not a valid integer for {}", value,
            sweep->param));
      }
    }
  }
}

ExperimentConfig ParseExperimentConfig(std::istream& in,
                                       const std::string& source_name) {
  ExperimentConfig config;
  SyntheticTopics synthetic;
  std::optional<ItemFileSource> files;
  std::optional<std::filesystem::path> prob_file;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (Trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(source_name, line_no, "expected key = value");
    }
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    try {
      if (key == "seed") {
        config.stream.seed = ParseNumber<std::uint64_t>(value, key);
      } else if (key == "n_items") {
        config.stream.n_items = ParseNumber<std::size_t>(value, key);
      } else if (key == "T") {
        config.stream.n_visits = ParseNumber<std::size_t>(value, key);
      } else if (key == "delta_T") {
        config.delta_visits = ParseNumber<std::size_t>(value, key);
      } else if (key == "k") {
        config.stream.k = ParseNumber<std::size_t>(value, key);
      } else if (key == "prob_lo") {
        config.stream.prob_lo = ParseNumber<double>(value, key);
      } else if (key == "prob_hi") {
        config.stream.prob_hi = ParseNumber<double>(value, key);
      } else if (key == "topics") {
        synthetic.topic_universe = ParseNumber<std::size_t>(value, key);
      } else if (key == "topics_per_item") {
        const auto colon = value.find(':');
        const std::string lo = Trim(value.substr(0, colon));
        const std::string hi =
            colon == std::string::npos ? lo : Trim(value.substr(colon + 1));
        synthetic.min_topics_per_item = ParseNumber<std::size_t>(lo, key);
        synthetic.max_topics_per_item = ParseNumber<std::size_t>(hi, key);
      } else if (key == "item_file") {
        files = ItemFileSource{value, std::nullopt};
      } else if (key == "prob_file") {
        prob_file = value;
      } else if (key == "repetitions") {
        config.repetitions = ParseNumber<std::size_t>(value, key);
      } else if (key == "policy") {
        config.policies.push_back(ParsePolicySpec(value));
      } else if (key == "sweep") {
        if (!config.sweep) config.sweep.emplace();
        config.sweep->param = value;
      } else if (key == "sweep_values") {
        if (!config.sweep) config.sweep.emplace();
        std::stringstream list(value);
        std::string token;
        while (std::getline(list, token, ',')) {
          config.sweep->values.push_back(
              ParseNumber<double>(Trim(token), key));
        }
      } else if (key == "format") {
        config.format = value;
      } else if (key == "out") {
        config.output = value;
      } else if (key == "timing") {
        if (value != "true" && value != "false") {
          throw std::invalid_argument("timing expects true or false");
        }
        config.record_timing = value == "true";
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw ParseError(source_name, line_no, e.what());
    }
  }
  if (files) {
    files->prob_path = prob_file;
    config.stream.topic_source = *files;
  } else {
    if (prob_file) {
      throw std::invalid_argument(source_name +
                                  ": prob_file requires item_file");
    }
    config.stream.topic_source = synthetic;
  }
  if (config.sweep && config.sweep->param.empty()) {
    throw std::invalid_argument(source_name +
                                ": sweep_values given without sweep");
  }
  config.Validate();
  return config;
}

ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file " + path.string());
  }
  return ParseExperimentConfig(in, path.string());
}

ExperimentConfig ApplySweepValue(const ExperimentConfig& config,
                                 const std::string& param, double value) {
  ExperimentConfig out = config;
  const auto as_size = static_cast<std::size_t>(value);
  if (param == "k") {
    out.stream.k = as_size;
  } else if (param == "T") {
    out.stream.n_visits = as_size;
  } else if (param == "delta_T") {
    out.delta_visits = as_size;
  } else if (param == "n_items") {
    out.stream.n_items = as_size;
  } else if (param == "prob_lo") {
    out.stream.prob_lo = value;
  } else if (param == "prob_hi") {
    out.stream.prob_hi = value;
  } else if (IsPolicyParam(param)) {
    const std::string text = IntegerSweepParams().contains(param)
                                 ? std::to_string(as_size)
                                 : Num(value);
    for (PolicySpec& spec : out.policies) {
      if (PolicyAcceptsParam(spec.name, param)) spec.params[param] = text;
    }
  } else {
    throw std::invalid_argument("cannot sweep unknown parameter '" + param +
                                "'");
  }
  out.Validate();
  return out;
}

std::uint64_t UserSeed(std::uint64_t master_seed, std::size_t repetition) {
  return DeriveSeed(DeriveSeed(master_seed, 0x5eed), repetition);
}

std::vector<SweepRow> RunSweep(const ExperimentConfig& config) {
  const std::string param = config.sweep ? config.sweep->param : "none";
  const std::vector<double> values =
      config.sweep ? config.sweep->values : std::vector<double>{0.0};
  std::vector<SweepRow> rows;
  for (double value : values) {
    const ExperimentConfig point =
        config.sweep ? ApplySweepValue(config, param, value) : config;
    // Policy rows are keyed by the label of the unswept spec so that a
    // swept policy parameter does not rename the series.
    std::map<std::string, Accumulator> acc;
    for (std::size_t r = 0; r < point.repetitions; ++r) {
      const std::uint64_t user_seed = UserSeed(point.stream.seed, r);
      const Stream stream = GenerateStream(point.stream, user_seed);
      const RunContext context{static_cast<int>(point.stream.k),
                               static_cast<int>(point.stream.n_visits),
                               static_cast<int>(point.stream.visit_bound),
                               user_seed};
      for (std::size_t p = 0; p < point.policies.size(); ++p) {
        const RunReport report = RunOne(stream, point.policies[p], context,
                                         point.record_timing);
        Accumulator& a = acc[config.policies[p].Label()];
        a.coverage.push_back(report.total_coverage);
        a.oracle_calls += static_cast<double>(report.oracle_calls);
        a.peak_copies += static_cast<double>(report.peak_copies);
        a.wall_time += report.wall_time_s;
        a.exhausted += report.exhausted ? 1 : 0;
      }
    }
    for (const auto& [label, a] : acc) {
      const double n = static_cast<double>(a.coverage.size());
      double mean = 0;
      for (double c : a.coverage) mean += c;
      mean /= n;
      double var = 0;
      for (double c : a.coverage) var += (c - mean) * (c - mean);
      SweepRow row;
      row.sweep_param = param;
      row.sweep_value = value;
      row.policy = label;
      row.mean_coverage = mean;
      row.std_coverage = a.coverage.size() > 1 ? std::sqrt(var / (n - 1)) : 0;
      row.mean_oracle_calls = a.oracle_calls / n;
      row.mean_peak_copies = a.peak_copies / n;
      row.mean_wall_time_s = a.wall_time / n;
      row.exhaustion_count = a.exhausted;
      rows.push_back(row);
    }
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SweepRow& a, const SweepRow& b) {
                     if (a.sweep_value != b.sweep_value) {
                       return a.sweep_value < b.sweep_value;
                     }
                     return a.policy < b.policy;
                   });
  return rows;
}

ReportFormat ParseReportFormat(const std::string& name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  throw std::invalid_argument("unknown report format '" + name +
                              "' (expected csv or json)");
}

std::string FormatReport(const std::vector<SweepRow>& rows,
                         ReportFormat format) {
  if (format == ReportFormat::kCsv) {
    std::string out =
        "sweep_param,sweep_value,policy,mean_coverage,std_coverage,"
        "mean_oracle_calls,mean_peak_copies,mean_wall_time_s,"
        "exhaustion_count\n";
    for (const SweepRow& row : rows) {
      out += fmt::format("{},{},{},{},{},{},{},{},{}\n", row.sweep_param,
                         Num(row.sweep_value), row.policy,
                         Num(row.mean_coverage), Num(row.std_coverage),
                         Num(row.mean_oracle_calls),
                         Num(row.mean_peak_copies),
                         Num(row.mean_wall_time_s), row.exhaustion_count);
    }
    return out;
  }
  ordered_json array = ordered_json::array();
  for (const SweepRow& row : rows) {
    ordered_json object;
    object["sweep_param"] = row.sweep_param;
    object["sweep_value"] = Round12(row.sweep_value);
    object["policy"] = row.policy;
    object["mean_coverage"] = Round12(row.mean_coverage);
    object["std_coverage"] = Round12(row.std_coverage);
    object["mean_oracle_calls"] = Round12(row.mean_oracle_calls);
    object["mean_peak_copies"] = Round12(row.mean_peak_copies);
    object["mean_wall_time_s"] = Round12(row.mean_wall_time_s);
    object["exhaustion_count"] = row.exhaustion_count;
    array.push_back(std::move(object));
  }
  return array.dump(2) + "\n";
}

std::vector<SweepRow> ParseJsonReport(const std::string& text) {
  const auto array = nlohmann::json::parse(text);
  std::vector<SweepRow> rows;
  for (const auto& object : array) {
    SweepRow row;
    row.sweep_param = object.at("sweep_param").get<std::string>();
    row.sweep_value = object.at("sweep_value").get<double>();
    row.policy = object.at("policy").get<std::string>();
    row.mean_coverage = object.at("mean_coverage").get<double>();
    row.std_coverage = object.at("std_coverage").get<double>();
    row.mean_oracle_calls = object.at("mean_oracle_calls").get<double>();
    row.mean_peak_copies = object.at("mean_peak_copies").get<double>();
    row.mean_wall_time_s = object.at("mean_wall_time_s").get<double>();
    row.exhaustion_count = object.at("exhaustion_count").get<std::size_t>();
    rows.push_back(row);
  }
  return rows;
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void EmitReport(const std::vector<SweepRow>& rows,
                const std::filesystem::path& path, ReportFormat format) {
  WriteTextFile(path, FormatReport(rows, format));
}

std::string FormatRunReport(const RunReport& report) {
  ordered_json object;
  object["policy"] = report.policy;
  object["total_coverage"] = Round12(report.total_coverage);
  object["oracle_calls"] = report.oracle_calls;
  object["peak_copies"] = report.peak_copies;
  object["wall_time_s"] = Round12(report.wall_time_s);
  object["exhausted"] = report.exhausted;
  ordered_json outputs = ordered_json::array();
  for (const OutputSet& output : report.outputs) {
    ordered_json visit;
    visit["visit"] = output.visit_index();
    visit["gain"] = Round12(output.gain_at_emission());
    ordered_json items = ordered_json::array();
    for (const ItemCopy& copy : output.items()) items.push_back(copy.item->id);
    visit["items"] = std::move(items);
    outputs.push_back(std::move(visit));
  }
  object["outputs"] = std::move(outputs);
  return object.dump(2) + "\n";
}

}  // namespace s3mor
