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

// Canonical JSON forms of the core types. Readers never throw; malformed
// input yields a ParseError status.
//
//   budget     {"type": "pure", "epsilon": e}
//              {"type": "adp", "epsilon": e, "delta": d}
//              {"type": "rdp", "curve": [...]}
//              {"type": "zcdp", "rho": r}
//   labels     {"attr": ["a1", "a2"], "context": ["standard"]}
//   blocks     "all" or [[begin, end], ...]
//   mechanism  {"labels", "cost": {unit: budget}, "blocks", "time_step"?}
//   request    {"id", "utility", "mechanisms": [...]}
//   unit       {"name", "group_factor_to", "ord_above", "time_based"}
//   rule       {"id", "predicate", "unit", "budget", "provenance",
//               "order_key"?}

#ifndef POLICY_ENGINE_SERIALIZATION_H_
#define POLICY_ENGINE_SERIALIZATION_H_

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"
#include "policy_engine/alpha_orders.h"
#include "policy_engine/label_set.h"
#include "policy_engine/privacy_budget.h"
#include "policy_engine/privacy_unit.h"
#include "policy_engine/release_request.h"
#include "policy_engine/rule.h"

namespace policy_engine {

using Json = nlohmann::json;

Json ToJson(const RdpCurve& curve);
Json ToJson(const PrivacyBudget& budget);
Json ToJson(const LabelSet& labels);
Json ToJson(const BlockSelection& blocks);
Json ToJson(const Mechanism& mechanism);
Json ToJson(const ReleaseRequest& request);
Json ToJson(const PrivacyUnit& unit);
Json ToJson(const Provenance& provenance);
Json ToJson(const OrderKey& key);
Json ToJson(const Rule& rule);

absl::StatusOr<RdpCurve> RdpCurveFromJson(const Json& j);
// Validates the budget; RDP curves must match `orders` when given.
absl::StatusOr<PrivacyBudget> BudgetFromJson(
    const Json& j, const AlphaOrders* orders = nullptr);
absl::StatusOr<LabelSet> LabelSetFromJson(const Json& j);
absl::StatusOr<BlockSelection> BlockSelectionFromJson(const Json& j);
absl::StatusOr<Mechanism> MechanismFromJson(const Json& j);
absl::StatusOr<ReleaseRequest> ReleaseRequestFromJson(const Json& j);
absl::StatusOr<PrivacyUnit> PrivacyUnitFromJson(const Json& j);
absl::StatusOr<Provenance> ProvenanceFromJson(const Json& j);
absl::StatusOr<OrderKey> OrderKeyFromJson(const Json& j);
absl::StatusOr<Rule> RuleFromJson(const Json& j);

Json RulesToJson(const std::vector<Rule>& rules);
absl::StatusOr<std::vector<Rule>> RulesFromJson(const Json& j);

// File helpers; failures are IOError or ParseError. Writers create missing
// parent directories.
absl::StatusOr<Json> ReadJsonFile(const std::string& path);
absl::Status WriteJsonFile(const std::string& path, const Json& j);
absl::Status WriteTextFile(const std::string& path, const std::string& text);

}  // namespace policy_engine

#endif  // POLICY_ENGINE_SERIALIZATION_H_
