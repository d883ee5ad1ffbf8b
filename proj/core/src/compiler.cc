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

#include "policy_engine/compiler.h"

#include <set>

#include "absl/strings/str_cat.h"
#include "policy_engine/status_macros.h"

namespace policy_engine {
namespace {

Rule MakeBaseRule(std::string id, Predicate predicate, std::string unit,
                  PrivacyBudget budget, const std::string& policy,
                  std::optional<OrderTuple> annotation, size_t index) {
  Rule rule;
  rule.id = std::move(id);
  rule.predicate = predicate;
  rule.unit = std::move(unit);
  rule.budget = std::move(budget);
  rule.provenance.base_policy = policy;
  rule.provenance.base_rule_index = index;
  rule.order_key = OrderKey{.base_id = index,
                            .base_predicate = std::move(predicate),
                            .base_annotation = std::move(annotation),
                            .extension_ranks = {}};
  return rule;
}

// `lhs && rhs`, dropping `true` operands and flattening nested ANDs.
Predicate Conjoin(const Predicate& lhs, const Predicate& rhs) {
  if (lhs.kind() == Predicate::Kind::kTrue) return rhs;
  if (rhs.kind() == Predicate::Kind::kTrue) return lhs;
  std::vector<Predicate> children;
  for (const Predicate* p : {&lhs, &rhs}) {
    if (p->kind() == Predicate::Kind::kAnd) {
      children.insert(children.end(), p->children().begin(),
                      p->children().end());
    } else {
      children.push_back(*p);
    }
  }
  return Predicate::And(std::move(children));
}

}  // namespace

std::vector<Rule> GenerateBaseRules(const std::vector<BasePolicy>& policies,
                                    const PolicySet& set) {
  std::vector<Rule> rules;
  for (const BasePolicy& base : policies) {
    if (const auto* p = std::get_if<CustomPolicy>(&base)) {
      rules.push_back(MakeBaseRule(absl::StrCat(p->name, "@", p->unit),
                                   p->predicate, p->unit, p->budget, p->name,
                                   p->annotation, rules.size()));
    } else if (const auto* p = std::get_if<PerAttributePolicy>(&base)) {
      for (const std::string& attr : set.attributes) {
        rules.push_back(
            MakeBaseRule(absl::StrCat(p->name, "/", attr, "@", p->unit),
                         Predicate::AttrIntersects({attr}), p->unit,
                         p->attribute_budgets.at(attr), p->name, std::nullopt,
                         rules.size()));
      }
    } else if (const auto* p = std::get_if<CategoryPolicy>(&base)) {
      for (const auto& [category, risk] : set.categories) {
        const PrivacyBudget& member_budget = p->risk_budgets.at(risk);
        // Scopes are cumulative: level L matches attributes connected to
        // the category at level ≤ L.
        std::set<std::string> scope;
        for (MembershipLevel level : kMembershipLevels) {
          for (const auto& [attr, cats] : p->membership) {
            auto it = cats.find(category);
            if (it != cats.end() && it->second == level) scope.insert(attr);
          }
          PrivacyBudget budget = member_budget;
          if (level == MembershipLevel::kStrong) {
            budget = *p->strong_fn.Apply(member_budget);  // validated on parse
          } else if (level == MembershipLevel::kWeak) {
            budget = *p->weak_fn.Apply(member_budget);  // validated on parse
          }
          rules.push_back(MakeBaseRule(
              absl::StrCat(p->name, "/", category, "/",
                           MembershipLevelName(level), "@", p->unit),
              Predicate::AttrIntersects(scope), p->unit, std::move(budget),
              p->name, std::nullopt, rules.size()));
        }
      }
    }
  }
  return rules;
}

std::vector<Rule> GenerateBaseRules(const PolicySet& set) {
  return GenerateBaseRules(set.base_policies, set);
}

absl::StatusOr<std::vector<Rule>> ApplyExtensions(
    std::vector<Rule> irules, const std::vector<ExtensionPolicy>& epolicies) {
  std::vector<Rule> current = std::move(irules);
  for (const ExtensionPolicy& policy : epolicies) {
    std::vector<Rule> next;
    next.reserve(current.size() * policy.extensions.size());
    for (const Rule& rule : current) {
      for (const Extension& ext : policy.extensions) {
        Rule extended = rule;
        extended.id = absl::StrCat(rule.id, "|", policy.name, "=", ext.name);
        extended.predicate = Conjoin(ext.predicate, rule.predicate);
        if (!ext.units.has_value() || ext.units->contains(rule.unit)) {
          ASSIGN_OR_RETURN(extended.budget, ext.budget_fn.Apply(rule.budget));
        }
        extended.provenance.extension_choices.emplace_back(policy.name,
                                                           ext.name);
        if (extended.order_key.has_value()) {
          extended.order_key->extension_ranks.push_back(ext.rank);
        }
        next.push_back(std::move(extended));
      }
    }
    current = std::move(next);
  }
  return current;
}

absl::StatusOr<CompiledPolicies> Compile(const PolicySet& set) {
  CompiledPolicies out;
  out.intermediate_rules = GenerateBaseRules(set);
  ASSIGN_OR_RETURN(out.rules, ApplyExtensions(out.intermediate_rules,
                                              set.extension_policies));
  out.per_release_rules = GenerateBaseRules(set.per_release_policies, set);
  return out;
}

}  // namespace policy_engine
