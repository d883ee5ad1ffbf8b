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

#ifndef POLICY_ENGINE_RULE_H_
#define POLICY_ENGINE_RULE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "policy_engine/predicate.h"
#include "policy_engine/privacy_budget.h"

namespace policy_engine {

// Admin-declared order annotation: a ≤ b iff a[i] ≤ b[i] for every i.
using OrderTuple = std::vector<int>;

// Componentwise ≤; tuples of different length are incomparable.
bool TupleLeq(const OrderTuple& lhs, const OrderTuple& rhs);

// How a rule was generated.
struct Provenance {
  std::string base_policy;
  // Position of the generating intermediate rule in the compiler's base
  // rule list.
  size_t base_rule_index = 0;
  // (extension policy, chosen extension) per applied extension policy.
  std::vector<std::pair<std::string, std::string>> extension_choices;

  bool operator==(const Provenance&) const = default;
};

// Decomposed ordering information: the base rule's scope plus one rank per
// extension policy. Two rules are compared dimension by dimension.
struct OrderKey {
  // Identity of the base dimension element; equal ids share a base key.
  size_t base_id = 0;
  // Scope predicate of the base rule; attribute-set scopes are
  // AttrIntersects atoms, so the subset order falls out of syntactic
  // implication.
  Predicate base_predicate;
  // Admin annotation for custom scopes.
  std::optional<OrderTuple> base_annotation;
  std::vector<OrderTuple> extension_ranks;

  bool operator==(const OrderKey&) const = default;
};

// A (predicate, privacy unit, budget) triple.
struct Rule {
  std::string id;
  Predicate predicate;
  std::string unit;
  PrivacyBudget budget;
  Provenance provenance;
  std::optional<OrderKey> order_key;

  bool operator==(const Rule&) const = default;
};

}  // namespace policy_engine

#endif  // POLICY_ENGINE_RULE_H_
