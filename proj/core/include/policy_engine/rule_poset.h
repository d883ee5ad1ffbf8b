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

// Partial order over rules and pruning of non-constraining rules.
//
// r1 ⪯ r2 when r1's scope is contained in r2's and r1's unit is below r2's.
// Scope containment is decided dimension by dimension on the rules' order
// keys: the base dimension (admin annotations when both rules carry one,
// otherwise syntactic implication of the base predicates), then one rank
// per extension policy. Mutually ⪯ rules are ordered by index (the earlier
// rule is the greater one), so the relation is antisymmetric.

#ifndef POLICY_ENGINE_RULE_POSET_H_
#define POLICY_ENGINE_RULE_POSET_H_

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "policy_engine/privacy_budget.h"
#include "policy_engine/privacy_unit.h"
#include "policy_engine/rule.h"

namespace policy_engine {

// Counters filled by RulePoset::Build.
struct PosetBuildStats {
  size_t rule_pairs = 0;
  // Distinct base-dimension comparisons actually evaluated (memoized).
  size_t base_comparisons = 0;
  // Distinct extension-rank comparisons actually evaluated (memoized).
  size_t extension_comparisons = 0;
};

// Scope/unit order before tie-breaking. IncomparableKeys when the base
// dimension is undecidable (no annotations, predicates outside the
// conjunctive fragment); callers building posets treat that as "not ⪯".
absl::StatusOr<bool> RuleLeq(const Rule& r1, const Rule& r2,
                             const UnitRegistry& units);

class RulePoset {
 public:
  static absl::StatusOr<RulePoset> Build(std::vector<Rule> rules,
                                         const UnitRegistry& units,
                                         PosetBuildStats* stats = nullptr);
  // Poset given by its Hasse diagram: (lower, upper) index pairs. Rejects
  // cycles and out-of-range indices.
  static absl::StatusOr<RulePoset> FromCoverEdges(
      std::vector<Rule> rules,
      const std::vector<std::pair<size_t, size_t>>& edges);

  size_t size() const { return rules_.size(); }
  const std::vector<Rule>& rules() const { return rules_; }
  const Rule& rule(size_t i) const { return rules_[i]; }
  std::optional<size_t> IndexOf(absl::string_view id) const;

  // i ⪯ j (reflexive).
  bool Leq(size_t i, size_t j) const { return leq_[i][j]; }
  bool Less(size_t i, size_t j) const { return i != j && leq_[i][j]; }

  // Maximal strict predecessors / minimal strict successors.
  const std::vector<size_t>& LowerCover(size_t i) const {
    return lower_cover_[i];
  }
  const std::vector<size_t>& UpperCover(size_t i) const {
    return upper_cover_[i];
  }
  std::vector<size_t> Maximal() const;
  // The greatest element, if one exists.
  std::optional<size_t> Top() const;
  // Every element appears after all of its strict successors.
  const std::vector<size_t>& TopDownOrder() const { return top_down_; }

  // Induced sub-poset on the rules with keep[i] set, in index order.
  RulePoset Restrict(const std::vector<bool>& keep) const;

  // Hasse diagram in DOT; inactive rules (when `active` is given) are grey.
  std::string ToDot(const std::vector<bool>* active = nullptr) const;

 private:
  RulePoset() = default;
  void ComputeCovers();

  std::vector<Rule> rules_;
  std::vector<std::vector<bool>> leq_;
  std::vector<std::vector<size_t>> lower_cover_;
  std::vector<std::vector<size_t>> upper_cover_;
  std::vector<size_t> top_down_;
};

// Lower cover as rules.
std::vector<Rule> LowerCover(const RulePoset& poset, size_t index);

// Whether some rule strictly above `index` has a budget that, expressed in
// this rule's unit, is ≤ this rule's budget. VariantMismatch when such a
// comparison crosses budget variants; pairs without a unit conversion path
// are skipped.
absl::StatusOr<bool> IsNonConstraining(const RulePoset& poset, size_t index,
                                       const UnitRegistry& units);

struct PruneRecord {
  std::string rule_id;
  std::string pruned_by;
  // The dominating budget expressed in the pruned rule's unit.
  PrivacyBudget implied_budget;
};

struct PruneResult {
  RulePoset pruned;
  std::vector<bool> active;
  std::vector<PruneRecord> records;
};

// Top-down propagation of implied budgets from a conceptual ∞ top. Each
// rule receives the budgets of all rules above it (kept as an antichain per
// unit and variant) and is deactivated when any of them, converted into its
// unit, is ≤ its own budget. Cross-variant and unconvertible pairs never
// deactivate.
PruneResult Prune(const RulePoset& poset, const UnitRegistry& units);

}  // namespace policy_engine

#endif  // POLICY_ENGINE_RULE_POSET_H_
