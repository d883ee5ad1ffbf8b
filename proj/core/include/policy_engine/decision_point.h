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

// Two-stage enforcement of a compiled rule set.
//
// Stage one checks every mechanism against the stateless per-release rules.
// Stage two walks the rule poset top-down: a rule whose predicate is false
// for a mechanism lets the walk skip everything below it. Every matching
// rule must admit the request's cost in every (block, time cell) it
// touches; only then are all costs committed at once.

#ifndef POLICY_ENGINE_DECISION_POINT_H_
#define POLICY_ENGINE_DECISION_POINT_H_

#include <map>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "policy_engine/alpha_orders.h"
#include "policy_engine/block_domain.h"
#include "policy_engine/filter_state.h"
#include "policy_engine/privacy_unit.h"
#include "policy_engine/release_request.h"
#include "policy_engine/rule.h"
#include "policy_engine/rule_poset.h"

namespace policy_engine {

struct Decision {
  bool accepted = false;
  // Rule that rejected the request, empty on accept.
  std::string rejected_by;
  bool per_release = false;
  // Rules that matched at least one mechanism, in poset index order.
  std::vector<std::string> matched_rules;
};

// The RDP cost of `mechanism` in `unit`: its own entry, or one converted
// from another unit it declares. MissingCost when none applies.
absl::StatusOr<RdpCurve> CostInUnit(const Mechanism& mechanism,
                                    const std::string& unit,
                                    const UnitRegistry& units,
                                    const AlphaOrders& orders);

// Stateless stage one.
absl::StatusOr<Decision> CheckPerRelease(
    const ReleaseRequest& request, const std::vector<Rule>& per_release_rules,
    const UnitRegistry& units,
    const AlphaOrders& orders = AlphaOrders::Default());

class DecisionPoint {
 public:
  static absl::StatusOr<DecisionPoint> Create(
      RulePoset poset, std::vector<Rule> per_release_rules, UnitRegistry units,
      BlockDomain domain, AlphaOrders orders = AlphaOrders::Default());

  // Both stages; on accept the request's costs are committed.
  absl::StatusOr<Decision> CheckAndCommit(const ReleaseRequest& request);

  // Scales every rule budget by `fraction` ∈ [0, 1] (budget unlocking).
  absl::Status SetBudgetFraction(double fraction);
  double budget_fraction() const { return fraction_; }

  void CollapseTime(int64_t new_now) { state_.CollapseTime(new_now); }

  // Remaining budget per rule id at the worst (block, cell): ε slack for
  // ADP budgets, the best per-order slack for RDP budgets.
  absl::StatusOr<std::map<std::string, double>> Headroom() const;

  // Disables poset skipping (every predicate is evaluated); decisions must
  // not change.
  void set_skip_traversal(bool skip) { skip_traversal_ = skip; }

  // Rule indices matching each mechanism of `request`, using the current
  // traversal mode; `evaluations` receives the number of predicate
  // evaluations.
  std::vector<std::vector<size_t>> MatchingRules(
      const ReleaseRequest& request, size_t* evaluations = nullptr) const;
  // Number of predicate evaluations of the last CheckAndCommit.
  size_t last_predicate_evaluations() const { return last_evaluations_; }

  const RulePoset& poset() const { return poset_; }
  const FilterState& state() const { return state_; }
  absl::Status LoadState(const nlohmann::json& j) { return state_.LoadJson(j); }
  const UnitRegistry& units() const { return units_; }
  const AlphaOrders& orders() const { return orders_; }
  const BlockDomain& domain() const { return domain_; }

 private:
  DecisionPoint(RulePoset poset, std::vector<Rule> per_release_rules,
                UnitRegistry units, BlockDomain domain, AlphaOrders orders);

  PrivacyBudget EffectiveBudget(size_t rule) const;

  RulePoset poset_;
  std::vector<Rule> per_release_rules_;
  UnitRegistry units_;
  BlockDomain domain_;
  AlphaOrders orders_;
  FilterState state_;
  std::vector<std::vector<size_t>> below_;  // strict down-sets
  double fraction_ = 1.0;
  bool skip_traversal_ = true;
  size_t last_evaluations_ = 0;
};

}  // namespace policy_engine

#endif  // POLICY_ENGINE_DECISION_POINT_H_
