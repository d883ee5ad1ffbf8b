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

#include "policy_engine/decision_point.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "boost/dynamic_bitset.hpp"
#include "policy_engine/accounting.h"
#include "policy_engine/errors.h"
#include "policy_engine/status_macros.h"

namespace policy_engine {
namespace {

// Slack of `consumed` under `budget`: ε slack for ADP, best per-order slack
// for RDP.
absl::StatusOr<double> Slack(const RdpCurve& consumed,
                             const PrivacyBudget& budget,
                             const AlphaOrders& orders) {
  if (const auto* adp = budget.get_if<ApproxDp>()) {
    if (adp->delta <= 0) {
      return consumed.IsZero() ? adp->epsilon
                               : -std::numeric_limits<double>::infinity();
    }
    ASSIGN_OR_RETURN(const ApproxDp spent,
                     RdpToAdp(consumed, adp->delta, orders));
    return adp->epsilon - spent.epsilon;
  }
  if (const auto* rdp = budget.get_if<RenyiDp>()) {
    double best = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < consumed.size(); ++i) {
      best = std::max(best, rdp->curve[i] - consumed[i]);
    }
    return best;
  }
  return VariantMismatchError("filter budgets must be adp or rdp");
}

}  // namespace

absl::StatusOr<RdpCurve> CostInUnit(const Mechanism& mechanism,
                                    const std::string& unit,
                                    const UnitRegistry& units,
                                    const AlphaOrders& orders) {
  if (auto it = mechanism.cost_by_unit.find(unit);
      it != mechanism.cost_by_unit.end()) {
    return ToRdpCost(it->second, orders);
  }
  for (const auto& [src, cost] : mechanism.cost_by_unit) {
    absl::StatusOr<PrivacyBudget> converted =
        ConvertUnit(cost, src, unit, units);
    if (converted.ok()) return ToRdpCost(*converted, orders);
  }
  return MissingCostError(
      absl::StrCat("mechanism has no cost convertible to unit ", unit));
}

absl::StatusOr<Decision> CheckPerRelease(
    const ReleaseRequest& request, const std::vector<Rule>& per_release_rules,
    const UnitRegistry& units, const AlphaOrders& orders) {
  Decision decision;
  decision.per_release = true;
  for (const Rule& rule : per_release_rules) {
    for (const Mechanism& m : request.mechanisms) {
      if (!rule.predicate.Evaluate(m.labels)) continue;
      bool ok = false;
      auto own = m.cost_by_unit.find(rule.unit);
      if (own != m.cost_by_unit.end() &&
          own->second.variant() == rule.budget.variant()) {
        ASSIGN_OR_RETURN(ok, BudgetLeq(own->second, rule.budget));
      } else {
        ASSIGN_OR_RETURN(const RdpCurve cost,
                         CostInUnit(m, rule.unit, units, orders));
        ASSIGN_OR_RETURN(ok, WithinBudget(cost, rule.budget, orders));
      }
      if (std::find(decision.matched_rules.begin(),
                    decision.matched_rules.end(),
                    rule.id) == decision.matched_rules.end()) {
        decision.matched_rules.push_back(rule.id);
      }
      if (!ok) {
        decision.rejected_by = rule.id;
        return decision;
      }
    }
  }
  decision.accepted = true;
  return decision;
}

DecisionPoint::DecisionPoint(RulePoset poset,
                             std::vector<Rule> per_release_rules,
                             UnitRegistry units, BlockDomain domain,
                             AlphaOrders orders)
    : poset_(std::move(poset)),
      per_release_rules_(std::move(per_release_rules)),
      units_(std::move(units)),
      domain_(std::move(domain)),
      orders_(std::move(orders)) {}

absl::StatusOr<DecisionPoint> DecisionPoint::Create(
    RulePoset poset, std::vector<Rule> per_release_rules, UnitRegistry units,
    BlockDomain domain, AlphaOrders orders) {
  if (absl::Status s = domain.Validate(); !s.ok()) {
    return ConfigError(s.message());
  }
  std::vector<std::string> ids;
  std::vector<bool> time_based;
  for (const Rule& rule : poset.rules()) {
    const PrivacyUnit* unit = units.Find(rule.unit);
    if (unit == nullptr) {
      return ValidationError(
          absl::StrCat("rule ", rule.id, " uses unknown unit ", rule.unit));
    }
    if (rule.budget.variant() != BudgetVariant::kApprox &&
        rule.budget.variant() != BudgetVariant::kRenyi) {
      return VariantMismatchError(absl::StrCat(
          "rule ", rule.id, " needs an adp or rdp budget for enforcement"));
    }
    RETURN_IF_ERROR(rule.budget.Validate(&orders));
    ids.push_back(rule.id);
    time_based.push_back(unit->time_based);
  }
  for (const Rule& rule : per_release_rules) {
    if (!units.Contains(rule.unit)) {
      return ValidationError(
          absl::StrCat("rule ", rule.id, " uses unknown unit ", rule.unit));
    }
  }
  DecisionPoint dp(std::move(poset), std::move(per_release_rules),
                   std::move(units), domain, std::move(orders));
  dp.state_ =
      FilterState(std::move(ids), time_based, dp.domain_, dp.orders_.size());
  const size_t n = dp.poset_.size();
  dp.below_.assign(n, {});
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (dp.poset_.Less(i, j)) dp.below_[j].push_back(i);
    }
  }
  return dp;
}

absl::Status DecisionPoint::SetBudgetFraction(double fraction) {
  if (!(fraction >= 0 && fraction <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("budget fraction must lie in [0, 1], got ", fraction));
  }
  fraction_ = fraction;
  return absl::OkStatus();
}

PrivacyBudget DecisionPoint::EffectiveBudget(size_t rule) const {
  const PrivacyBudget& budget = poset_.rule(rule).budget;
  return fraction_ == 1.0 ? budget : ScaleBudget(budget, fraction_);
}

std::vector<std::vector<size_t>> DecisionPoint::MatchingRules(
    const ReleaseRequest& request, size_t* evaluations) const {
  const size_t n = poset_.size();
  std::vector<std::vector<size_t>> out;
  size_t count = 0;
  for (const Mechanism& m : request.mechanisms) {
    std::vector<size_t> matched;
    boost::dynamic_bitset<> skipped(n);
    for (size_t j : poset_.TopDownOrder()) {
      if (skipped[j]) continue;
      ++count;
      if (poset_.rule(j).predicate.Evaluate(m.labels)) {
        matched.push_back(j);
      } else if (skip_traversal_) {
        for (size_t i : below_[j]) skipped.set(i);
      }
    }
    std::sort(matched.begin(), matched.end());
    out.push_back(std::move(matched));
  }
  if (evaluations != nullptr) *evaluations = count;
  return out;
}

absl::StatusOr<Decision> DecisionPoint::CheckAndCommit(
    const ReleaseRequest& request) {
  ASSIGN_OR_RETURN(
      Decision decision,
      CheckPerRelease(request, per_release_rules_, units_, orders_));
  if (!decision.accepted) return decision;
  decision = Decision();

  const std::vector<std::vector<size_t>> matching =
      MatchingRules(request, &last_evaluations_);
  std::map<size_t, std::vector<Charge>> pending;
  for (size_t m = 0; m < request.mechanisms.size(); ++m) {
    const Mechanism& mechanism = request.mechanisms[m];
    for (size_t rule : matching[m]) {
      ASSIGN_OR_RETURN(
          RdpCurve cost,
          CostInUnit(mechanism, poset_.rule(rule).unit, units_, orders_));
      pending[rule].push_back(
          Charge{std::move(cost), mechanism.blocks.Resolve(domain_.domain_size),
                 mechanism.time_step});
    }
  }

  // Phase one: check every touched cell on copies.
  std::vector<std::pair<size_t, RuleCells>> updated;
  updated.reserve(pending.size());
  for (const auto& [rule, charges] : pending) {
    decision.matched_rules.push_back(poset_.rule(rule).id);
    ASSIGN_OR_RETURN(RuleCells cells, state_.Apply(rule, charges));
    const PrivacyBudget budget = EffectiveBudget(rule);
    absl::Status status;
    bool within = true;
    FilterState::ForEachTouched(
        cells, charges, state_.now(), domain_, [&](const RdpCurve& curve) {
          if (!within || !status.ok()) return;
          absl::StatusOr<bool> ok = WithinBudget(curve, budget, orders_);
          if (!ok.ok()) {
            status = ok.status();
          } else if (!*ok) {
            within = false;
          }
        });
    RETURN_IF_ERROR(status);
    if (!within) {
      decision.rejected_by = poset_.rule(rule).id;
      return decision;
    }
    updated.emplace_back(rule, std::move(cells));
  }

  // Phase two: commit.
  for (auto& [rule, cells] : updated) state_.Replace(rule, std::move(cells));
  decision.accepted = true;
  return decision;
}

absl::StatusOr<std::map<std::string, double>> DecisionPoint::Headroom() const {
  std::map<std::string, double> out;
  for (size_t i = 0; i < poset_.size(); ++i) {
    const PrivacyBudget budget = EffectiveBudget(i);
    double worst = std::numeric_limits<double>::infinity();
    absl::Status status;
    state_.ForEachCurve(i, [&](const RdpCurve& curve) {
      absl::StatusOr<double> slack = Slack(curve, budget, orders_);
      if (!slack.ok()) {
        status = slack.status();
        return;
      }
      worst = std::min(worst, *slack);
    });
    RETURN_IF_ERROR(status);
    out[poset_.rule(i).id] = worst;
  }
  return out;
}

}  // namespace policy_engine
