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

#include "testing/random_policies.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "absl/strings/str_cat.h"
#include "policy_engine/alpha_orders.h"
#include "policy_engine/status_macros.h"

namespace policy_engine::testing {
namespace {

constexpr int kAttributes = 5;
constexpr double kDelta = 1e-6;

std::string Attr(int i) { return absl::StrCat("a", i); }

std::set<std::string> RandomAttrSet(std::mt19937_64& rng, int max_size) {
  std::uniform_int_distribution<int> size(1, max_size);
  std::uniform_int_distribution<int> pick(0, kAttributes - 1);
  std::set<std::string> out;
  const int n = size(rng);
  while (static_cast<int>(out.size()) < n) out.insert(Attr(pick(rng)));
  return out;
}

Predicate RandomPredicate(std::mt19937_64& rng) {
  const char* contexts[] = {"std", "ml"};
  std::uniform_int_distribution<int> kind(0, 4);
  std::bernoulli_distribution coin(0.5);
  switch (kind(rng)) {
    case 0:
      return Predicate::True();
    case 1:
      return Predicate::HasLabel("context", contexts[coin(rng)]);
    case 2:
    case 3:
      return Predicate::AttrIntersects(RandomAttrSet(rng, 4));
    default:
      return Predicate::And(
          {Predicate::AttrIntersects(RandomAttrSet(rng, 4)),
           Predicate::HasLabel("context", contexts[coin(rng)])});
  }
}

// Curve of a declared cost, computed here rather than by the library.
std::vector<double> CurveOf(const PrivacyBudget& cost,
                            const AlphaOrders& orders) {
  std::vector<double> curve(orders.size(), 0.0);
  if (const auto* pure = cost.get_if<PureDp>()) {
    std::fill(curve.begin(), curve.end(), pure->epsilon);
  } else if (const auto* z = cost.get_if<ZeroConcentratedDp>()) {
    for (size_t i = 0; i < orders.size(); ++i) curve[i] = z->rho * orders[i];
  }
  return curve;
}

}  // namespace

UnitRegistry UserAndMonthUnits() {
  PrivacyUnit user{.name = "user"};
  PrivacyUnit month{
      .name = "user_month", .ord_above = {"user"}, .time_based = true};
  return *UnitRegistry::Create({user, month});
}

BlockDomain SmallDomain() {
  return BlockDomain{.partitioning_attributes = {"region"},
                     .domain_size = 8,
                     .time_axis = TimeAxis{2, 6}};
}

std::vector<Rule> RandomRules(int n, std::mt19937_64& rng) {
  const AlphaOrders& orders = AlphaOrders::Default();
  std::uniform_int_distribution<int> eps_step(1, 8);
  std::bernoulli_distribution time_unit(0.4);
  std::bernoulli_distribution rdp(0.2);
  std::vector<Rule> rules;
  for (int i = 0; i < n; ++i) {
    Rule rule;
    rule.id = absl::StrCat("r", i);
    rule.predicate = RandomPredicate(rng);
    rule.unit = time_unit(rng) ? "user_month" : "user";
    const double eps = 0.75 * eps_step(rng);
    if (rdp(rng)) {
      rule.budget = RenyiDp{RdpCurve::Constant(eps, orders.size())};
    } else {
      rule.budget = ApproxDp{eps, kDelta};
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

std::vector<TraceEvent> RandomTrace(int length, const BlockDomain& domain,
                                    std::mt19937_64& rng) {
  const char* contexts[] = {"std", "ml"};
  const int64_t horizon = domain.time_axis ? domain.time_axis->horizon : 1;
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution advance(0.1);
  std::bernoulli_distribution all_blocks(0.2);
  std::bernoulli_distribution untimed(0.3);
  std::uniform_int_distribution<int> num_mechanisms(1, 2);
  std::uniform_int_distribution<int> level(1, 10);
  std::uniform_int_distribution<int64_t> start(0, domain.domain_size - 1);
  std::uniform_int_distribution<int64_t> length_dist(1, domain.domain_size);
  std::uniform_int_distribution<int64_t> step(0, horizon - 1);
  std::vector<TraceEvent> trace;
  int64_t now = 0;
  for (int i = 0; i < length; ++i) {
    TraceEvent event;
    if (advance(rng) && now + 1 < horizon) event.advance_to = ++now;
    event.request.id = absl::StrCat("q", i);
    const int m = num_mechanisms(rng);
    for (int k = 0; k < m; ++k) {
      Mechanism mech;
      for (const std::string& a : RandomAttrSet(rng, 3)) {
        mech.labels.Add(kAttributeKey, a).IgnoreError();
      }
      mech.labels.Add("context", contexts[coin(rng)]).IgnoreError();
      if (coin(rng)) {
        mech.cost_by_unit["user"] = PureDp{0.05 * level(rng)};
      } else {
        mech.cost_by_unit["user"] = ZeroConcentratedDp{0.001 * level(rng)};
      }
      if (!all_blocks(rng)) {
        mech.blocks = BlockSelection::WrappingRange(
            start(rng), length_dist(rng), domain.domain_size);
      }
      if (!untimed(rng)) mech.time_step = step(rng);
      event.request.mechanisms.push_back(std::move(mech));
    }
    trace.push_back(std::move(event));
  }
  return trace;
}

absl::StatusOr<std::vector<bool>> RunTrace(
    DecisionPoint& dp, const std::vector<TraceEvent>& trace) {
  std::vector<bool> out;
  for (const TraceEvent& event : trace) {
    if (event.advance_to >= 0) dp.CollapseTime(event.advance_to);
    ASSIGN_OR_RETURN(const Decision d, dp.CheckAndCommit(event.request));
    out.push_back(d.accepted);
  }
  return out;
}

absl::StatusOr<double> ReplayExcess(const std::vector<Rule>& rules,
                                    const UnitRegistry& units,
                                    const BlockDomain& domain,
                                    const std::vector<TraceEvent>& trace,
                                    const std::vector<bool>& accepted) {
  const AlphaOrders& orders = AlphaOrders::Default();
  const size_t n = orders.size();
  const int64_t horizon = domain.time_axis ? domain.time_axis->horizon : 1;
  double worst = -std::numeric_limits<double>::infinity();
  for (const Rule& rule : rules) {
    const bool timed = units.Find(rule.unit)->time_based;
    const int64_t cells = timed ? horizon : 1;
    const int64_t d = domain.domain_size;
    // Difference arrays over blocks: diff[(step * (d + 1) + block) * n + i].
    std::vector<double> diff(cells * (d + 1) * n, 0.0);
    for (size_t e = 0; e < trace.size(); ++e) {
      if (!accepted[e]) continue;
      for (const Mechanism& m : trace[e].request.mechanisms) {
        if (!rule.predicate.Evaluate(m.labels)) continue;
        const std::vector<double> curve =
            CurveOf(m.cost_by_unit.at("user"), orders);
        for (int64_t t = 0; t < cells; ++t) {
          // Untimed mechanisms charge every step.
          if (timed && m.time_step.has_value() && *m.time_step != t) continue;
          for (const BlockInterval& b : m.blocks.Resolve(d)) {
            for (size_t i = 0; i < n; ++i) {
              diff[(t * (d + 1) + b.begin) * n + i] += curve[i];
              diff[(t * (d + 1) + b.end) * n + i] -= curve[i];
            }
          }
        }
      }
    }
    std::vector<double> cell(n);
    for (int64_t t = 0; t < cells; ++t) {
      std::fill(cell.begin(), cell.end(), 0.0);
      for (int64_t b = 0; b < d; ++b) {
        for (size_t i = 0; i < n; ++i) {
          cell[i] += diff[(t * (d + 1) + b) * n + i];
        }
        double excess;
        if (const auto* adp = rule.budget.get_if<ApproxDp>()) {
          double eps = std::numeric_limits<double>::infinity();
          for (size_t i = 0; i < n; ++i) {
            eps =
                std::min(eps, cell[i] - std::log(adp->delta) / (orders[i] - 1));
          }
          excess = (eps - adp->epsilon) / adp->epsilon;
        } else if (const auto* r = rule.budget.get_if<RenyiDp>()) {
          // Within budget when some order is within budget.
          excess = std::numeric_limits<double>::infinity();
          for (size_t i = 0; i < n; ++i) {
            excess = std::min(excess, (cell[i] - r->curve[i]) / r->curve[i]);
          }
        } else {
          return absl::InvalidArgumentError("replay handles adp and rdp only");
        }
        worst = std::max(worst, excess);
      }
    }
  }
  return worst;
}

}  // namespace policy_engine::testing
