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

#ifndef S3MOR_POLICY_FACTORY_H_
#define S3MOR_POLICY_FACTORY_H_

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "s3mor/policy.h"

namespace s3mor {

// A policy name plus string parameters, e.g. "storm tprime=T".
//
//   lmgreedy    sample=<int>          stochastic-greedy sample size, 0 = exact
//   storm       tprime=<int>|T|bound  candidate sets (default: the bound T')
//               skip=<prob>           skip sampling, 0 = off
//   stormpp     delta=<int>           guess spacing (default 10)
//               tprime=<int>|T|bound, skip=<prob>
//   sievepp     epsilon=<real>        threshold grid ratio (default 0.1)
//   preemption  c=<real>              preemption factor (default 1)
struct PolicySpec {
  std::string name;
  std::map<std::string, std::string> params;

  // "name" or "name[key=value;...]" with keys sorted.
  std::string Label() const;
};

// Parses "name key=value key=value". Throws std::invalid_argument.
PolicySpec ParsePolicySpec(std::string_view text);

// Throws std::invalid_argument on unknown names, keys or ill-typed values.
void ValidatePolicySpec(const PolicySpec& spec);

// Whether `key` is a parameter of policy `name`.
bool PolicyAcceptsParam(std::string_view name, std::string_view key);

std::vector<std::string> PolicyNames();

struct RunContext {
  int k = 1;
  int n_visits = 1;     // T
  int visit_bound = 1;  // T'
  std::uint64_t seed = 0;
};

std::unique_ptr<Policy> MakePolicy(const PolicySpec& spec,
                                   const RunContext& context);

}  // namespace s3mor

#endif  // S3MOR_POLICY_FACTORY_H_
