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

#include "policy_engine/scenario.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "absl/strings/str_cat.h"
#include "policy_engine/budget_fn.h"
#include "policy_engine/compiler.h"
#include "policy_engine/decision_point.h"
#include "policy_engine/errors.h"
#include "policy_engine/policy_set.h"
#include "policy_engine/rule_poset.h"
#include "policy_engine/status_macros.h"

namespace policy_engine {
namespace {

using nlohmann::json;

constexpr double kViolationTolerance = 1e-9;

json Adp(double epsilon, double delta) {
  return {{"type", "adp"}, {"epsilon", epsilon}, {"delta", delta}};
}

json RiskBudgets(const std::map<std::string, double>& budgets, double delta) {
  json out = json::object();
  for (const auto& [risk, eps] : budgets) out[risk] = Adp(eps, delta);
  return out;
}

absl::StatusOr<BudgetFn> ContextMap(const WorkloadConfig& cfg) {
  return BudgetFn::MapTable(std::vector<BudgetFn::Knot>(
      cfg.context_knots.begin(), cfg.context_knots.end()));
}

// Attributes whose membership in `category` is at `level` or closer.
std::set<std::string> CategoryScope(const Schema& schema,
                                    const std::string& category,
                                    MembershipLevel level) {
  std::set<std::string> scope;
  for (const auto& [attr, levels] : schema.membership) {
    auto it = levels.find(category);
    if (it != levels.end() &&
        static_cast<int>(it->second) <= static_cast<int>(level)) {
      scope.insert(attr);
    }
  }
  return scope;
}

bool AnyAttribute(const Mechanism& m, const std::set<std::string>& scope) {
  for (const std::string& a : m.labels.Values(kAttributeKey)) {
    if (scope.contains(a)) return true;
  }
  return false;
}

// Cost curve of a mechanism straight from its declared cost.
absl::StatusOr<std::vector<double>> DeclaredCurve(const Mechanism& m,
                                                  const AlphaOrders& orders) {
  if (m.cost_by_unit.empty()) return MissingCostError("mechanism has no cost");
  const PrivacyBudget& cost = m.cost_by_unit.begin()->second;
  std::vector<double> curve(orders.size());
  if (const auto* pure = cost.get_if<PureDp>()) {
    std::fill(curve.begin(), curve.end(), pure->epsilon);
  } else if (const auto* zcdp = cost.get_if<ZeroConcentratedDp>()) {
    for (size_t i = 0; i < orders.size(); ++i) curve[i] = zcdp->rho * orders[i];
  } else if (const auto* rdp = cost.get_if<RenyiDp>()) {
    curve.assign(rdp->curve.values().begin(), rdp->curve.values().end());
  } else {
    return UnsupportedVariantError("tracker needs pure, zcdp or rdp costs");
  }
  return curve;
}

absl::StatusOr<DecisionPoint> MakeDecisionPoint(const WorkloadConfig& cfg,
                                                const Schema& schema,
                                                RunMode mode,
                                                double epsilon_total,
                                                ScenarioRun& run) {
  if (mode == RunMode::kBaseline) {
    Rule global{.id = "global",
                .predicate = Predicate::True(),
                .unit = "user",
                .budget = ApproxDp{epsilon_total, cfg.delta_budget}};
    ASSIGN_OR_RETURN(RulePoset poset,
                     RulePoset::FromCoverEdges({std::move(global)}, {}));
    run.rules_compiled = run.rules_active = 1;
    return DecisionPoint::Create(
        std::move(poset), {}, UnitRegistry::SingleUser(),
        BlockDomain{.domain_size = cfg.pa_domain_size});
  }
  ASSIGN_OR_RETURN(const json doc,
                   ScenarioPolicyDocument(cfg, schema, epsilon_total));
  ASSIGN_OR_RETURN(PolicySet set, ParsePolicySet(doc));
  ASSIGN_OR_RETURN(CompiledPolicies compiled, Compile(set));
  ASSIGN_OR_RETURN(RulePoset poset,
                   RulePoset::Build(std::move(compiled.rules), set.units));
  PruneResult pruned = Prune(poset, set.units);
  run.rules_compiled = poset.size();
  run.rules_active = pruned.pruned.size();
  return DecisionPoint::Create(std::move(pruned.pruned),
                               std::move(compiled.per_release_rules), set.units,
                               set.block_domain);
}

}  // namespace

const char* RunModeName(RunMode mode) {
  return mode == RunMode::kDPolicy ? "dpolicy" : "baseline";
}

absl::StatusOr<RunMode> ParseRunMode(const std::string& name) {
  if (name == "dpolicy") return RunMode::kDPolicy;
  if (name == "baseline") return RunMode::kBaseline;
  return ConfigError(absl::StrCat("unknown mode '", name, "'"));
}

absl::StatusOr<double> StandardBudget(const WorkloadConfig& cfg,
                                      double epsilon_total) {
  ASSIGN_OR_RETURN(const BudgetFn map, ContextMap(cfg));
  return map.InvertScalar(epsilon_total);
}

absl::StatusOr<json> ScenarioPolicyDocument(const WorkloadConfig& cfg,
                                            const Schema& schema,
                                            double epsilon_total) {
  const double delta = cfg.delta_budget;
  json doc;
  json block_domain = {{"partitioning_attributes", json::array({"pa"})},
                       {"size", cfg.pa_domain_size}};
  json global = {{"type", "custom"},
                 {"name", "global"},
                 {"unit", "user"},
                 {"predicate", "true"},
                 {"budget", Adp(epsilon_total, delta)}};
  switch (cfg.scenario) {
    case ScenarioKind::kContext: {
      // The base rule carries the standard budget; the catch-all extension
      // maps it up to the total.
      ASSIGN_OR_RETURN(const double standard,
                       StandardBudget(cfg, epsilon_total));
      global["budget"] = Adp(standard, delta);
      json knots = json::array();
      for (const auto& [in, out] : cfg.context_knots)
        knots.push_back({in, out});
      doc["base_policies"] = json::array({global});
      json extensions = json::array();
      extensions.push_back({{"name", "standard"},
                            {"predicate", "context == standard"},
                            {"rank", 0}});
      extensions.push_back(
          {{"name", "any"},
           {"predicate", "true"},
           {"budget_fn", {{"type", "map_table"}, {"knots", knots}}},
           {"rank", 1}});
      doc["extension_policies"] =
          json::array({json{{"name", "context"}, {"extensions", extensions}}});
      break;
    }
    case ScenarioKind::kScope: {
      json assignments = json::object();
      for (size_t i = 0; i < schema.attributes.size(); ++i) {
        assignments[schema.attributes[i]] = schema.attribute_risk[i];
      }
      json categories = json::object();
      for (size_t c = 0; c < schema.categories.size(); ++c) {
        categories[schema.categories[c]] = schema.category_risk[c];
      }
      json membership = json::object();
      for (const auto& [attr, levels] : schema.membership) {
        for (const auto& [cat, level] : levels) {
          membership[attr][cat] = std::string(MembershipLevelName(level));
        }
      }
      doc["attributes"] = schema.attributes;
      doc["categories"] = categories;
      doc["base_policies"] = json::array(
          {global,
           {{"type", "per_attribute"},
            {"name", "attribute"},
            {"unit", "user"},
            {"risk_budgets", RiskBudgets(cfg.attribute_risk_budgets, delta)},
            {"assignments", assignments}},
           {{"type", "category"},
            {"name", "category"},
            {"unit", "user"},
            {"risk_budgets", RiskBudgets(cfg.category_risk_budgets, delta)},
            {"membership", membership},
            {"level_fns",
             {{"strong", {{"type", "scale"}, {"factor", cfg.strong_factor}}},
              {"weak", {{"type", "scale"}, {"factor", cfg.weak_factor}}}}}}});
      break;
    }
    case ScenarioKind::kTime: {
      doc["units"] = json::array(
          {json{{"name", "user"}}, json{{"name", "user_month"},
                                        {"ord_above", json::array({"user"})},
                                        {"time_based", true}}});
      // Months within the request window stay granular.
      block_domain["time_axis"] = {{"granular_window", cfg.month_radius + 1},
                                   {"horizon", MonthHorizon(cfg)}};
      doc["base_policies"] =
          json::array({global,
                       {{"type", "custom"},
                        {"name", "monthly"},
                        {"unit", "user_month"},
                        {"predicate", "data == time"},
                        {"budget", Adp(cfg.month_budget, delta)}}});
      break;
    }
  }
  doc["block_domain"] = block_domain;
  return doc;
}

double ScenarioRun::MaxFinalEpsilon(const std::string& group) const {
  double best = 0;
  if (rounds.empty()) return best;
  for (const ScopeValue& v : rounds.back().scopes) {
    if (v.group == group) best = std::max(best, v.epsilon);
  }
  return best;
}

int ScenarioRun::ViolationCount() const {
  int count = 0;
  for (const RoundReport& r : rounds) {
    for (const ScopeValue& v : r.scopes) count += v.violated ? 1 : 0;
  }
  return count;
}

ScopeTracker::ScopeTracker(int64_t domain_size, double delta,
                           const AlphaOrders& orders)
    : domain_size_(domain_size), orders_(orders) {
  const double log_inv_delta = -std::log(delta);
  for (size_t i = 0; i < orders.size(); ++i) {
    log_term_.push_back(log_inv_delta / (orders[i] - 1.0));
  }
}

void ScopeTracker::AddScope(std::string name, std::string group, double bound,
                            Matcher matches) {
  scopes_.push_back(
      Scope{std::move(name), std::move(group), bound, std::move(matches),
            std::vector<double>((domain_size_ + 1) * orders_.size(), 0.0)});
}

absl::Status ScopeTracker::Record(const ReleaseRequest& request) {
  const size_t n = orders_.size();
  for (const Mechanism& m : request.mechanisms) {
    ASSIGN_OR_RETURN(const std::vector<double> curve,
                     DeclaredCurve(m, orders_));
    const std::vector<BlockInterval> blocks = m.blocks.Resolve(domain_size_);
    for (Scope& scope : scopes_) {
      if (!scope.matches(m)) continue;
      for (const BlockInterval& b : blocks) {
        for (size_t i = 0; i < n; ++i) {
          scope.diff[b.begin * n + i] += curve[i];
          scope.diff[b.end * n + i] -= curve[i];
        }
      }
    }
  }
  return absl::OkStatus();
}

std::vector<ScopeValue> ScopeTracker::Snapshot() const {
  const size_t n = orders_.size();
  std::vector<ScopeValue> out;
  std::vector<double> running(n);
  for (const Scope& scope : scopes_) {
    std::fill(running.begin(), running.end(), 0.0);
    double worst = 0;
    for (int64_t b = 0; b < domain_size_; ++b) {
      double eps = std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < n; ++i) {
        running[i] += scope.diff[b * n + i];
        eps = std::min(eps, running[i] + log_term_[i]);
      }
      // Untouched blocks have spent nothing.
      bool touched = false;
      for (size_t i = 0; i < n && !touched; ++i) touched = running[i] > 0;
      if (touched) worst = std::max(worst, eps);
    }
    out.push_back(ScopeValue{scope.name, scope.group, scope.bound, worst,
                             worst > scope.bound * (1 + kViolationTolerance)});
  }
  return out;
}

absl::StatusOr<ScopeTracker> MakeScenarioTracker(const WorkloadConfig& cfg,
                                                 const Schema& schema,
                                                 double epsilon_total) {
  ScopeTracker tracker(cfg.pa_domain_size, cfg.delta_budget);
  tracker.AddScope("global", "global", epsilon_total,
                   [](const Mechanism&) { return true; });
  switch (cfg.scenario) {
    case ScenarioKind::kContext: {
      ASSIGN_OR_RETURN(const double standard,
                       StandardBudget(cfg, epsilon_total));
      tracker.AddScope("standard", "standard", standard,
                       [](const Mechanism& m) {
                         return m.labels.Has(kContextKey, "standard");
                       });
      break;
    }
    case ScenarioKind::kScope: {
      for (size_t c = 0; c < schema.categories.size(); ++c) {
        if (schema.category_risk[c] != "high") continue;
        const std::string& cat = schema.categories[c];
        const double member = cfg.category_risk_budgets.at("high");
        const struct {
          MembershipLevel level;
          const char* name;
          double bound;
        } levels[] = {
            {MembershipLevel::kMember, "category_member", member},
            {MembershipLevel::kStrong, "category_strong",
             member * cfg.strong_factor},
            {MembershipLevel::kWeak, "category_weak", member * cfg.weak_factor},
        };
        for (const auto& level : levels) {
          std::set<std::string> scope = CategoryScope(schema, cat, level.level);
          tracker.AddScope(absl::StrCat(cat, ".", level.name), level.name,
                           level.bound,
                           [scope = std::move(scope)](const Mechanism& m) {
                             return AnyAttribute(m, scope);
                           });
        }
      }
      for (size_t a = 0; a < schema.attributes.size(); ++a) {
        if (schema.attribute_risk[a] != "high") continue;
        const std::string attr = schema.attributes[a];
        tracker.AddScope(absl::StrCat("attr.", attr), "attribute_high",
                         cfg.attribute_risk_budgets.at("high"),
                         [attr](const Mechanism& m) {
                           return m.labels.Has(kAttributeKey, attr);
                         });
      }
      break;
    }
    case ScenarioKind::kTime: {
      for (int64_t month = 0; month < MonthHorizon(cfg); ++month) {
        tracker.AddScope(absl::StrCat("month.", month), "month",
                         cfg.month_budget, [month](const Mechanism& m) {
                           return m.time_step == month &&
                                  m.labels.Has("data", "time");
                         });
      }
      break;
    }
  }
  return tracker;
}

absl::StatusOr<ScenarioRun> RunScenario(const WorkloadConfig& cfg, RunMode mode,
                                        double epsilon_total) {
  ASSIGN_OR_RETURN(WorkloadGenerator gen, WorkloadGenerator::Create(cfg));
  ScenarioRun run{.scenario = cfg.scenario,
                  .mode = mode,
                  .epsilon_total = epsilon_total,
                  .seed = cfg.seed};
  ASSIGN_OR_RETURN(ScopeTracker tracker,
                   MakeScenarioTracker(cfg, gen.schema(), epsilon_total));
  ASSIGN_OR_RETURN(DecisionPoint dp, MakeDecisionPoint(cfg, gen.schema(), mode,
                                                       epsilon_total, run));
  const bool timed =
      mode == RunMode::kDPolicy && cfg.scenario == ScenarioKind::kTime;
  double cumulative = 0;
  for (int round = 1; round <= cfg.rounds; ++round) {
    std::vector<WorkloadRequest> candidates = gen.NextRound(round);
    RoundReport report{
        .round = round,
        .budget_fraction =
            std::min(1.0, static_cast<double>(round) / cfg.unlock_rounds)};
    RETURN_IF_ERROR(dp.SetBudgetFraction(report.budget_fraction));
    if (timed) dp.CollapseTime(MonthOfRound(cfg, round));
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const WorkloadRequest& a, const WorkloadRequest& b) {
                       return a.request.utility > b.request.utility;
                     });
    report.candidates = static_cast<int>(candidates.size());
    for (const WorkloadRequest& c : candidates) {
      ASSIGN_OR_RETURN(const Decision decision, dp.CheckAndCommit(c.request));
      if (!decision.accepted) continue;
      RETURN_IF_ERROR(tracker.Record(c.request));
      ++report.accepted;
      report.utility += c.request.utility;
    }
    cumulative += report.utility;
    report.cumulative_utility = cumulative;
    report.scopes = tracker.Snapshot();
    run.rounds.push_back(std::move(report));
  }
  return run;
}

absl::StatusOr<std::vector<ScenarioRun>> RunSweep(const WorkloadConfig& cfg,
                                                  RunMode mode) {
  std::vector<ScenarioRun> runs;
  for (double eps : cfg.epsilon_totals) {
    ASSIGN_OR_RETURN(ScenarioRun run, RunScenario(cfg, mode, eps));
    runs.push_back(std::move(run));
  }
  return runs;
}

}  // namespace policy_engine
