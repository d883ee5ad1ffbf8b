// Copyright 2026 The Policy Engine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POLICY_ENGINE_COMPILER_H_
#define POLICY_ENGINE_COMPILER_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "policy_engine/policy_set.h"
#include "policy_engine/rule.h"

namespace policy_engine {

// Intermediate rules of the base policies, in declaration order:
//   custom         one rule, id `<policy>@<unit>`
//   per_attribute  one rule per schema attribute a, predicate `attr in {a}`,
//                  id `<policy>/<a>@<unit>`
//   category       three rules per category c with cumulative scopes
//                  member ⊆ strong ⊆ weak, id `<policy>/<c>/<level>@<unit>`
// Every rule gets a fresh base_id and an OrderKey with no extension ranks.
std::vector<Rule> GenerateBaseRules(const std::vector<BasePolicy>& policies,
                                    const PolicySet& set);
std::vector<Rule> GenerateBaseRules(const PolicySet& set);

// Expands each rule by every extension of each policy in turn: predicate
// `ext && rule`, budget ext.budget_fn(rule.budget) (identity for units
// outside the extension's unit filter), id suffix `|<policy>=<ext>`. The
// result has |irules| · Π|E_i| rules.
absl::StatusOr<std::vector<Rule>> ApplyExtensions(
    std::vector<Rule> irules, const std::vector<ExtensionPolicy>& epolicies);

struct CompiledPolicies {
  std::vector<Rule> intermediate_rules;
  std::vector<Rule> rules;
  // Stateless per-release rules (base policies only).
  std::vector<Rule> per_release_rules;
};

absl::StatusOr<CompiledPolicies> Compile(const PolicySet& set);

}  // namespace policy_engine

#endif  // POLICY_ENGINE_COMPILER_H_
