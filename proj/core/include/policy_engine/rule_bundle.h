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

// Everything a decision point needs, in a form that survives a round trip
// through JSON: the active rules with their Hasse diagram, the per-release
// rules, the unit registry and the block domain.

#ifndef POLICY_ENGINE_RULE_BUNDLE_H_
#define POLICY_ENGINE_RULE_BUNDLE_H_

#include <cstddef>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"
#include "policy_engine/block_domain.h"
#include "policy_engine/decision_point.h"
#include "policy_engine/privacy_unit.h"
#include "policy_engine/rule.h"
#include "policy_engine/rule_poset.h"

namespace policy_engine {

struct RuleBundle {
  std::vector<Rule> rules;
  // (lower, upper) index pairs of the Hasse diagram.
  std::vector<std::pair<size_t, size_t>> cover_edges;
  std::vector<Rule> per_release_rules;
  std::vector<PrivacyUnit> units;
  BlockDomain domain;
};

RuleBundle MakeRuleBundle(const RulePoset& poset,
                          std::vector<Rule> per_release_rules,
                          const UnitRegistry& units, BlockDomain domain);

nlohmann::json ToJson(const RuleBundle& bundle);
absl::StatusOr<RuleBundle> RuleBundleFromJson(const nlohmann::json& j);

absl::StatusOr<DecisionPoint> DecisionPointFromBundle(const RuleBundle& bundle);

}  // namespace policy_engine

#endif  // POLICY_ENGINE_RULE_BUNDLE_H_
