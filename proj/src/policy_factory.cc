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

#include "s3mor/policy_factory.h"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

#include "s3mor/baselines.h"
#include "s3mor/lmgreedy.h"
#include "s3mor/random.h"
#include "s3mor/storm.h"

namespace s3mor {
namespace {

const std::map<std::string, std::vector<std::string>, std::less<>>&
KnownParams() {
  static const auto* const params =
      new std::map<std::string, std::vector<std::string>, std::less<>>{
          {"lmgreedy", {"sample"}},
          {"storm", {"tprime", "skip"}},
          {"stormpp", {"delta", "tprime", "skip"}},
          {"sievepp", {"epsilon"}},
          {"preemption", {"c"}},
      };
  return *params;
}

long ParseInt(const PolicySpec& spec, const std::string& key, long fallback) {
  const auto it = spec.params.find(key);
  if (it == spec.params.end()) return fallback;
  long value = 0;
  const std::string& text = it->second;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument(fmt::format(
        "{}: parameter {} expects an integer, got '{}'", spec.name, key, text));
  }
  return value;
}

double ParseReal(const PolicySpec& spec, const std::string& key,
                 double fallback) {
  const auto it = spec.params.find(key);
  if (it == spec.params.end()) return fallback;
  double value = 0;
  const std::string& text = it->second;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument(fmt::format(
        "{}: parameter {} expects a number, got '{}'", spec.name, key, text));
  }
  return value;
}

int ResolveVisitBound(const PolicySpec& spec, const RunContext& context) {
  const auto it = spec.params.find("tprime");
  if (it == spec.params.end() || it->second == "bound") {
    return context.visit_bound;
  }
  if (it->second == "T") return context.n_visits;
  return static_cast<int>(ParseInt(spec, "tprime", context.visit_bound));
}

SkipSampling ResolveSkip(const PolicySpec& spec, std::uint64_t seed) {
  const double prob = ParseReal(spec, "skip", 0.0);
  if (!(prob >= 0.0 && prob < 1.0)) {
    throw std::invalid_argument(
        fmt::format("{}: skip probability must be in [0, 1)", spec.name));
  }
  return SkipSampling{prob > 0.0, prob, seed};
}

}  // namespace

std::string PolicySpec::Label() const {
  if (params.empty()) return name;
  std::vector<std::string> parts;
  for (const auto& [key, value] : params) parts.push_back(key + "=" + value);
  return fmt::format("{}[{}]", name, fmt::join(parts, ";"));
}

PolicySpec ParsePolicySpec(std::string_view text) {
  std::istringstream in{std::string(text)};
  PolicySpec spec;
  if (!(in >> spec.name)) throw std::invalid_argument("empty policy spec");
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == token.size()) {
      throw std::invalid_argument(
          fmt::format("policy parameter '{}' is not key=value", token));
    }
    spec.params[token.substr(0, eq)] = token.substr(eq + 1);
  }
  ValidatePolicySpec(spec);
  return spec;
}

bool PolicyAcceptsParam(std::string_view name, std::string_view key) {
  const auto it = KnownParams().find(name);
  if (it == KnownParams().end()) return false;
  return std::find(it->second.begin(), it->second.end(), key) !=
         it->second.end();
}

std::vector<std::string> PolicyNames() {
  return {"lmgreedy", "storm", "stormpp", "sievepp", "preemption"};
}

void ValidatePolicySpec(const PolicySpec& spec) {
  if (!KnownParams().contains(spec.name)) {
    throw std::invalid_argument(fmt::format(
        "unknown policy '{}' (expected one of: {})", spec.name,
        fmt::join(PolicyNames(), ", ")));
  }
  for (const auto& [key, value] : spec.params) {
    if (!PolicyAcceptsParam(spec.name, key)) {
      throw std::invalid_argument(
          fmt::format("policy {} has no parameter '{}'", spec.name, key));
    }
  }
  // Dry-run construction-time parsing of every typed value.
  RunContext probe{1, 1, 1, 0};
  if (spec.params.contains("tprime")) {
    const int bound = ResolveVisitBound(spec, probe);
    if (bound < 1) throw std::invalid_argument("tprime must be positive");
  }
  if (ParseInt(spec, "sample", 0) < 0) {
    throw std::invalid_argument("sample must be non-negative");
  }
  if (ParseInt(spec, "delta", 10) < 1) {
    throw std::invalid_argument("delta must be positive");
  }
  if (!(ParseReal(spec, "epsilon", 0.1) > 0.0)) {
    throw std::invalid_argument("epsilon must be positive");
  }
  if (!(ParseReal(spec, "c", 1.0) >= 0.0)) {
    throw std::invalid_argument("c must be non-negative");
  }
  ResolveSkip(spec, 0);
}

std::unique_ptr<Policy> MakePolicy(const PolicySpec& spec,
                                   const RunContext& context) {
  ValidatePolicySpec(spec);
  const std::uint64_t seed =
      DeriveSeed(context.seed, HashLabel(spec.Label()));
  if (spec.name == "lmgreedy") {
    return std::make_unique<LmGreedy>(
        context.k, static_cast<std::size_t>(ParseInt(spec, "sample", 0)),
        seed);
  }
  if (spec.name == "storm") {
    return std::make_unique<Storm>(ResolveVisitBound(spec, context),
                                   context.k, ResolveSkip(spec, seed));
  }
  if (spec.name == "stormpp") {
    return std::make_unique<StormPlusPlus>(
        ResolveVisitBound(spec, context), context.k,
        static_cast<int>(ParseInt(spec, "delta", 10)),
        ResolveSkip(spec, seed));
  }
  if (spec.name == "sievepp") {
    return std::make_unique<SieveStreamingPP>(
        context.k, ParseReal(spec, "epsilon", 0.1));
  }
  return std::make_unique<PreemptionStreaming>(context.k,
                                               ParseReal(spec, "c", 1.0));
}

}  // namespace s3mor
