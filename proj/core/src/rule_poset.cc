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

#include "policy_engine/rule_poset.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_replace.h"
#include "absl/strings/string_view.h"
#include "boost/dynamic_bitset.hpp"
#include "policy_engine/accounting.h"
#include "policy_engine/errors.h"
#include "policy_engine/status_macros.h"

namespace policy_engine {
namespace {

using Bitset = boost::dynamic_bitset<>;

absl::StatusOr<bool> PredicateLeq(const Predicate& a, const Predicate& b) {
  std::optional<bool> implied = SyntacticallyImplies(a, b);
  if (!implied.has_value()) {
    return IncomparableKeysError(absl::StrCat("cannot order '", a.ToString(),
                                              "' and '", b.ToString(),
                                              "' without an annotation"));
  }
  return *implied;
}

absl::StatusOr<bool> BaseLeq(const OrderKey& a, const OrderKey& b) {
  if (a.base_id == b.base_id && a.base_predicate == b.base_predicate) {
    return true;
  }
  if (a.base_annotation.has_value() && b.base_annotation.has_value()) {
    return TupleLeq(*a.base_annotation, *b.base_annotation);
  }
  return PredicateLeq(a.base_predicate, b.base_predicate);
}

// Memoizing comparator over the decomposed order.
class Comparator {
 public:
  Comparator(const UnitRegistry& units, PosetBuildStats* stats)
      : units_(units), stats_(stats) {}

  absl::StatusOr<bool> Leq(const Rule& a, const Rule& b) {
    if (stats_ != nullptr) ++stats_->rule_pairs;
    if (!units_.Leq(a.unit, b.unit)) return false;
    if (!a.order_key.has_value() || !b.order_key.has_value()) {
      if (stats_ != nullptr) ++stats_->base_comparisons;
      return PredicateLeq(a.predicate, b.predicate);
    }
    const OrderKey& ka = *a.order_key;
    const OrderKey& kb = *b.order_key;
    if (ka.extension_ranks.size() != kb.extension_ranks.size()) return false;
    for (size_t m = 0; m < ka.extension_ranks.size(); ++m) {
      auto key =
          std::make_tuple(m, ka.extension_ranks[m], kb.extension_ranks[m]);
      auto it = ext_memo_.find(key);
      if (it == ext_memo_.end()) {
        if (stats_ != nullptr) ++stats_->extension_comparisons;
        it = ext_memo_
                 .emplace(std::move(key), TupleLeq(ka.extension_ranks[m],
                                                   kb.extension_ranks[m]))
                 .first;
      }
      if (!it->second) return false;
    }
    auto key = std::make_pair(ka.base_id, kb.base_id);
    auto it = base_memo_.find(key);
    if (it == base_memo_.end()) {
      if (stats_ != nullptr) ++stats_->base_comparisons;
      absl::StatusOr<bool> leq = BaseLeq(ka, kb);
      it = base_memo_.emplace(key, leq).first;
    }
    return it->second;
  }

 private:
  const UnitRegistry& units_;
  PosetBuildStats* stats_;
  std::map<std::pair<size_t, size_t>, absl::StatusOr<bool>> base_memo_;
  std::map<std::tuple<size_t, OrderTuple, OrderTuple>, bool> ext_memo_;
};

// Warshall closure in place; rows are "i ≤ ·" sets.
void TransitiveClosure(std::vector<Bitset>& up) {
  const size_t n = up.size();
  for (size_t k = 0; k < n; ++k) {
    for (size_t i = 0; i < n; ++i) {
      if (up[i][k]) up[i] |= up[k];
    }
  }
}

std::string DotEscape(absl::string_view s) {
  return absl::StrReplaceAll(s, {{"\\", "\\\\"}, {"\"", "\\\""}});
}

}  // namespace

absl::StatusOr<bool> RuleLeq(const Rule& r1, const Rule& r2,
                             const UnitRegistry& units) {
  Comparator comparator(units, nullptr);
  return comparator.Leq(r1, r2);
}

absl::StatusOr<RulePoset> RulePoset::Build(std::vector<Rule> rules,
                                           const UnitRegistry& units,
                                           PosetBuildStats* stats) {
  const size_t n = rules.size();
  std::set<std::string> ids;
  for (const Rule& rule : rules) {
    if (!units.Contains(rule.unit)) {
      return ValidationError(
          absl::StrCat("rule ", rule.id, " uses unknown unit ", rule.unit));
    }
    if (!ids.insert(rule.id).second) {
      return ValidationError(absl::StrCat("duplicate rule id ", rule.id));
    }
  }
  Comparator comparator(units, stats);
  std::vector<Bitset> raw(n, Bitset(n));
  for (size_t i = 0; i < n; ++i) {
    raw[i].set(i);
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      absl::StatusOr<bool> leq = comparator.Leq(rules[i], rules[j]);
      // Undecidable pairs stay incomparable; anything else is a real error.
      if (!leq.ok()) {
        if (absl::IsFailedPrecondition(leq.status())) continue;
        return leq.status();
      }
      if (*leq) raw[i].set(j);
    }
  }
  // Annotations and syntactic implication may mix; close the relation so
  // the poset is transitive.
  TransitiveClosure(raw);

  RulePoset poset;
  poset.rules_ = std::move(rules);
  poset.leq_.assign(n, std::vector<bool>(n, false));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      poset.leq_[i][j] = i == j || (raw[i][j] && (!raw[j][i] || i > j));
    }
  }
  poset.ComputeCovers();
  return poset;
}

absl::StatusOr<RulePoset> RulePoset::FromCoverEdges(
    std::vector<Rule> rules,
    const std::vector<std::pair<size_t, size_t>>& edges) {
  const size_t n = rules.size();
  std::vector<Bitset> up(n, Bitset(n));
  for (size_t i = 0; i < n; ++i) up[i].set(i);
  for (const auto& [lower, upper] : edges) {
    if (lower >= n || upper >= n || lower == upper) {
      return ValidationError(
          absl::StrCat("invalid cover edge ", lower, " -> ", upper));
    }
    up[lower].set(upper);
  }
  TransitiveClosure(up);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (up[i][j] && up[j][i]) {
        return ValidationError("cover edges contain a cycle");
      }
    }
  }
  RulePoset poset;
  poset.rules_ = std::move(rules);
  poset.leq_.assign(n, std::vector<bool>(n, false));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) poset.leq_[i][j] = up[i][j];
  }
  poset.ComputeCovers();
  return poset;
}

void RulePoset::ComputeCovers() {
  const size_t n = rules_.size();
  std::vector<Bitset> below(n, Bitset(n));
  std::vector<size_t> above_count(n, 0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (Less(i, j)) {
        below[j].set(i);
        ++above_count[i];
      }
    }
  }
  lower_cover_.assign(n, {});
  upper_cover_.assign(n, {});
  for (size_t j = 0; j < n; ++j) {
    Bitset cover = below[j];
    for (size_t k = below[j].find_first(); k != Bitset::npos;
         k = below[j].find_next(k)) {
      cover -= below[k];
    }
    for (size_t i = cover.find_first(); i != Bitset::npos;
         i = cover.find_next(i)) {
      lower_cover_[j].push_back(i);
      upper_cover_[i].push_back(j);
    }
  }
  top_down_.resize(n);
  std::iota(top_down_.begin(), top_down_.end(), 0);
  std::stable_sort(top_down_.begin(), top_down_.end(), [&](size_t a, size_t b) {
    return above_count[a] < above_count[b];
  });
}

std::optional<size_t> RulePoset::IndexOf(absl::string_view id) const {
  for (size_t i = 0; i < rules_.size(); ++i) {
    if (rules_[i].id == id) return i;
  }
  return std::nullopt;
}

std::vector<size_t> RulePoset::Maximal() const {
  std::vector<size_t> out;
  for (size_t i = 0; i < size(); ++i) {
    if (upper_cover_[i].empty()) out.push_back(i);
  }
  return out;
}

std::optional<size_t> RulePoset::Top() const {
  std::vector<size_t> maximal = Maximal();
  if (maximal.size() != 1) return std::nullopt;
  return maximal.front();
}

RulePoset RulePoset::Restrict(const std::vector<bool>& keep) const {
  std::vector<size_t> kept;
  for (size_t i = 0; i < size(); ++i) {
    if (i < keep.size() && keep[i]) kept.push_back(i);
  }
  RulePoset out;
  out.leq_.assign(kept.size(), std::vector<bool>(kept.size(), false));
  for (size_t a = 0; a < kept.size(); ++a) {
    out.rules_.push_back(rules_[kept[a]]);
    for (size_t b = 0; b < kept.size(); ++b) {
      out.leq_[a][b] = leq_[kept[a]][kept[b]];
    }
  }
  out.ComputeCovers();
  return out;
}

std::string RulePoset::ToDot(const std::vector<bool>* active) const {
  std::string dot = "digraph rules {\n  rankdir=BT;\n  node [shape=box];\n";
  for (size_t i = 0; i < size(); ++i) {
    const bool grey = active != nullptr && i < active->size() && !(*active)[i];
    absl::StrAppend(&dot, "  n", i, " [label=\"", DotEscape(rules_[i].id),
                    "\\n", DotEscape(rules_[i].budget.DebugString()), "\"",
                    grey ? ", color=gray, fontcolor=gray" : "", "];\n");
  }
  for (size_t j = 0; j < size(); ++j) {
    for (size_t i : lower_cover_[j]) {
      absl::StrAppend(&dot, "  n", i, " -> n", j, ";\n");
    }
  }
  dot += "}\n";
  return dot;
}

std::vector<Rule> LowerCover(const RulePoset& poset, size_t index) {
  std::vector<Rule> out;
  for (size_t i : poset.LowerCover(index)) out.push_back(poset.rule(i));
  return out;
}

absl::StatusOr<bool> IsNonConstraining(const RulePoset& poset, size_t index,
                                       const UnitRegistry& units) {
  const Rule& rule = poset.rule(index);
  for (size_t k = 0; k < poset.size(); ++k) {
    if (!poset.Less(index, k)) continue;
    const Rule& upper = poset.rule(k);
    absl::StatusOr<PrivacyBudget> converted =
        ConvertUnit(upper.budget, upper.unit, rule.unit, units);
    if (!converted.ok() || converted->variant() != rule.budget.variant()) {
      continue;
    }
    ASSIGN_OR_RETURN(const bool leq, BudgetLeq(*converted, rule.budget));
    if (leq) return true;
  }
  return false;
}

PruneResult Prune(const RulePoset& poset, const UnitRegistry& units) {
  struct Implied {
    size_t source;
    const PrivacyBudget* budget;
    const std::string* unit;
  };
  const size_t n = poset.size();
  std::vector<std::vector<Implied>> propagated(n);
  std::vector<bool> active(n, true);
  std::vector<PruneRecord> records;

  for (size_t j : poset.TopDownOrder()) {
    const Rule& rule = poset.rule(j);
    // Budgets of every rule above j, deduplicated by source.
    std::map<size_t, Implied> incoming;
    for (size_t k : poset.UpperCover(j)) {
      for (const Implied& e : propagated[k]) incoming.emplace(e.source, e);
    }
    for (const auto& [source, e] : incoming) {
      absl::StatusOr<PrivacyBudget> converted =
          ConvertUnit(*e.budget, *e.unit, rule.unit, units);
      if (!converted.ok() || converted->variant() != rule.budget.variant()) {
        continue;
      }
      absl::StatusOr<bool> leq = BudgetLeq(*converted, rule.budget);
      if (leq.ok() && *leq) {
        active[j] = false;
        records.push_back({rule.id, poset.rule(source).id, *converted});
        break;
      }
    }
    incoming.emplace(j, Implied{j, &rule.budget, &rule.unit});
    // Keep an antichain: drop entries dominated by another entry in the
    // same unit and variant.
    std::vector<Implied>& out = propagated[j];
    for (const auto& [source, e] : incoming) {
      bool dominated = false;
      for (const auto& [other_source, other] : incoming) {
        if (other_source == source || *other.unit != *e.unit ||
            other.budget->variant() != e.budget->variant()) {
          continue;
        }
        absl::StatusOr<bool> leq = BudgetLeq(*other.budget, *e.budget);
        if (!leq.ok() || !*leq) continue;
        absl::StatusOr<bool> back = BudgetLeq(*e.budget, *other.budget);
        // Equal budgets: keep the lower source index.
        if (back.ok() && *back && source < other_source) continue;
        dominated = true;
        break;
      }
      if (!dominated) out.push_back(e);
    }
  }
  PruneResult result{poset.Restrict(active), active, std::move(records)};
  return result;
}

}  // namespace policy_engine
