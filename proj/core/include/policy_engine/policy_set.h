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

// Parsed policy documents. See ParsePolicySet for the JSON schema.

#ifndef POLICY_ENGINE_POLICY_SET_H_
#define POLICY_ENGINE_POLICY_SET_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "nlohmann/json.hpp"
#include "policy_engine/block_domain.h"
#include "policy_engine/budget_fn.h"
#include "policy_engine/predicate.h"
#include "policy_engine/privacy_budget.h"
#include "policy_engine/privacy_unit.h"
#include "policy_engine/rule.h"

namespace policy_engine {

struct CustomPolicy {
  std::string name;
  Predicate predicate;
  std::string unit;
  PrivacyBudget budget;
  // Admin ordering annotation for predicates outside the conjunctive
  // fragment.
  std::optional<OrderTuple> annotation;
};

struct PerAttributePolicy {
  std::string name;
  std::string unit;
  std::map<std::string, PrivacyBudget> risk_budgets;
  // Risk level per attribute; empty when the budget is given explicitly.
  std::map<std::string, std::string> attribute_risk;
  // Resolved budget for every schema attribute.
  std::map<std::string, PrivacyBudget> attribute_budgets;
};

enum class MembershipLevel { kMember = 0, kStrong = 1, kWeak = 2 };

inline constexpr MembershipLevel kMembershipLevels[] = {
    MembershipLevel::kMember, MembershipLevel::kStrong, MembershipLevel::kWeak};

absl::string_view MembershipLevelName(MembershipLevel level);

struct CategoryPolicy {
  std::string name;
  std::string unit;
  std::map<std::string, PrivacyBudget> risk_budgets;
  // attribute -> category -> level.
  std::map<std::string, std::map<std::string, MembershipLevel>> membership;
  BudgetFn strong_fn;
  BudgetFn weak_fn;
};

using BasePolicy =
    std::variant<CustomPolicy, PerAttributePolicy, CategoryPolicy>;

const std::string& BasePolicyName(const BasePolicy& policy);

struct Extension {
  std::string name;
  Predicate predicate;
  // When set, the budget function only applies to rules in these units;
  // other rules keep their budget (the predicate is still conjoined).
  std::optional<std::set<std::string>> units;
  BudgetFn budget_fn;
  OrderTuple rank;
};

struct ExtensionPolicy {
  std::string name;
  std::vector<Extension> extensions;
};

struct PolicySet {
  UnitRegistry units = UnitRegistry::SingleUser();
  // Attribute schema, in declaration (popularity) order.
  std::vector<std::string> attributes;
  // Category name and risk level, in declaration order.
  std::vector<std::pair<std::string, std::string>> categories;
  std::vector<BasePolicy> base_policies;
  std::vector<ExtensionPolicy> extension_policies;
  std::vector<BasePolicy> per_release_policies;
  BlockDomain block_domain;
};

// Document schema (all keys but base_policies optional):
//
//   units:       [{name, group_factor_to?, ord_above?, time_based?}]
//                (default: a single "user" unit)
//   attributes:  [name, ...]
//   categories:  {name: risk_level, ...}
//   block_domain: {partitioning_attributes?, size, time_axis?: {
//                  granular_window, horizon}}
//   base_policies / per_release_policies: list of
//     {type: "custom", name, predicate, unit, budget, annotation?}
//     {type: "per_attribute", name, unit, risk_budgets: {risk: budget},
//      assignments: {attr: risk | budget}, default_risk?}
//     {type: "category", name, unit, risk_budgets: {risk: budget},
//      membership: {attr: {category: member|strong|weak}},
//      level_fns: {strong: budget_fn, weak: budget_fn}}
//   extension_policies: [{name, extensions: [{name, predicate, units?,
//                         budget_fn?, rank: int | [int, ...]}]}]
//
// ParseError for malformed input, ValidationError for inconsistent
// references, missing catch-all extensions, inconsistent ranks and bad tables.
absl::StatusOr<PolicySet> ParsePolicySet(const nlohmann::json& document);
absl::StatusOr<PolicySet> ParsePolicySetText(absl::string_view text);

}  // namespace policy_engine

#endif  // POLICY_ENGINE_POLICY_SET_H_
