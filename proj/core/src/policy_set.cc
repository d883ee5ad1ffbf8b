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

#include "policy_engine/policy_set.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "policy_engine/errors.h"
#include "policy_engine/label_set.h"
#include "policy_engine/serialization.h"
#include "policy_engine/status_macros.h"

namespace policy_engine {
namespace {

using nlohmann::json;

absl::StatusOr<std::string> GetString(const json& j, absl::string_view key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    return ParseError(absl::StrCat("expected string field '", key, "'"));
  }
  return it->get<std::string>();
}

absl::Status CheckIdentifier(absl::string_view what, absl::string_view name) {
  if (!IsValidIdentifier(name)) {
    return ValidationError(
        absl::StrCat("invalid ", what, " name '", name, "'"));
  }
  return absl::OkStatus();
}

absl::StatusOr<OrderTuple> ParseRank(const json& j) {
  if (j.is_number_integer()) return OrderTuple{j.get<int>()};
  if (j.is_array() && !j.empty()) {
    OrderTuple tuple;
    for (const json& v : j) {
      if (!v.is_number_integer()) {
        return ParseError("rank entries must be integers");
      }
      tuple.push_back(v.get<int>());
    }
    return tuple;
  }
  return ParseError("rank must be an integer or a non-empty integer list");
}

absl::StatusOr<std::map<std::string, PrivacyBudget>> ParseRiskBudgets(
    const json& j) {
  if (!j.is_object()) return ParseError("risk_budgets must be an object");
  std::map<std::string, PrivacyBudget> out;
  for (const auto& [risk, budget] : j.items()) {
    RETURN_IF_ERROR(CheckIdentifier("risk level", risk));
    ASSIGN_OR_RETURN(out[risk], BudgetFromJson(budget));
  }
  return out;
}

absl::StatusOr<MembershipLevel> ParseLevel(absl::string_view s) {
  for (MembershipLevel level : kMembershipLevels) {
    if (MembershipLevelName(level) == s) return level;
  }
  return ValidationError(absl::StrCat("unknown membership level '", s, "'"));
}

// Rejects declared order pairs a ≤ b whose predicates provably are not
// a ⊑ b; pairs outside the decidable fragment are trusted.
absl::Status CheckRankConsistency(absl::string_view what,
                                  const std::string& name_a, const Predicate& a,
                                  const OrderTuple& ra,
                                  const std::string& name_b, const Predicate& b,
                                  const OrderTuple& rb) {
  if (!TupleLeq(ra, rb)) return absl::OkStatus();
  if (SyntacticallyImplies(a, b) == std::optional<bool>(false)) {
    return ValidationError(
        absl::StrCat(what, " '", name_a, "' is ranked below '", name_b,
                     "' but its predicate does not imply the other's"));
  }
  return absl::OkStatus();
}

class DocumentParser {
 public:
  explicit DocumentParser(const json& doc) : doc_(doc) {}

  absl::StatusOr<PolicySet> Parse() {
    if (!doc_.is_object())
      return ParseError("policy document must be an object");
    for (const auto& [key, unused] : doc_.items()) {
      static const std::set<std::string> kKnown = {
          "units",         "attributes",         "categories",
          "base_policies", "extension_policies", "per_release_policies",
          "block_domain"};
      if (!kKnown.contains(key)) {
        return ParseError(absl::StrCat("unknown top-level key '", key, "'"));
      }
    }
    RETURN_IF_ERROR(ParseUnits());
    RETURN_IF_ERROR(ParseAttributes());
    RETURN_IF_ERROR(ParseCategories());
    RETURN_IF_ERROR(ParseBlockDomain());
    ASSIGN_OR_RETURN(set_.base_policies, ParseBaseList("base_policies"));
    ASSIGN_OR_RETURN(set_.per_release_policies,
                     ParseBaseList("per_release_policies"));
    RETURN_IF_ERROR(ParseExtensionPolicies());
    RETURN_IF_ERROR(CheckCustomAnnotations());
    return std::move(set_);
  }

 private:
  absl::Status ParseUnits() {
    if (!doc_.contains("units")) return absl::OkStatus();
    const json& units = doc_["units"];
    if (!units.is_array()) return ParseError("units must be a list");
    std::vector<PrivacyUnit> parsed;
    for (const json& u : units) {
      ASSIGN_OR_RETURN(PrivacyUnit unit, PrivacyUnitFromJson(u));
      parsed.push_back(std::move(unit));
    }
    auto registry = UnitRegistry::Create(std::move(parsed));
    if (!registry.ok()) return ValidationError(registry.status().message());
    set_.units = *std::move(registry);
    return absl::OkStatus();
  }

  absl::Status ParseAttributes() {
    if (!doc_.contains("attributes")) return absl::OkStatus();
    const json& attrs = doc_["attributes"];
    if (!attrs.is_array()) return ParseError("attributes must be a list");
    for (const json& a : attrs) {
      if (!a.is_string()) return ParseError("attribute names must be strings");
      const std::string name = a.get<std::string>();
      RETURN_IF_ERROR(CheckIdentifier("attribute", name));
      if (!attribute_set_.insert(name).second) {
        return ValidationError(absl::StrCat("duplicate attribute ", name));
      }
      set_.attributes.push_back(name);
    }
    return absl::OkStatus();
  }

  absl::Status ParseCategories() {
    if (!doc_.contains("categories")) return absl::OkStatus();
    const json& cats = doc_["categories"];
    if (!cats.is_object()) {
      return ParseError("categories must map category names to risk levels");
    }
    for (const auto& [name, risk] : cats.items()) {
      RETURN_IF_ERROR(CheckIdentifier("category", name));
      if (!risk.is_string())
        return ParseError("category risk must be a string");
      set_.categories.emplace_back(name, risk.get<std::string>());
      category_risk_[name] = risk.get<std::string>();
    }
    return absl::OkStatus();
  }

  absl::Status ParseBlockDomain() {
    if (!doc_.contains("block_domain")) return absl::OkStatus();
    const json& bd = doc_["block_domain"];
    if (!bd.is_object()) return ParseError("block_domain must be an object");
    try {
      BlockDomain domain;
      domain.partitioning_attributes =
          bd.value("partitioning_attributes", std::vector<std::string>());
      domain.domain_size = bd.value("size", int64_t{1});
      if (bd.contains("time_axis")) {
        const json& ta = bd["time_axis"];
        domain.time_axis = TimeAxis{ta.at("granular_window").get<int64_t>(),
                                    ta.at("horizon").get<int64_t>()};
      }
      if (absl::Status s = domain.Validate(); !s.ok()) {
        return ValidationError(s.message());
      }
      set_.block_domain = std::move(domain);
    } catch (const json::exception& e) {
      return ParseError(absl::StrCat("block_domain: ", e.what()));
    }
    return absl::OkStatus();
  }

  absl::Status CheckUnit(absl::string_view unit) {
    if (!set_.units.Contains(unit)) {
      return ValidationError(absl::StrCat("unknown unit '", unit, "'"));
    }
    return absl::OkStatus();
  }

  absl::StatusOr<std::vector<BasePolicy>> ParseBaseList(absl::string_view key) {
    std::vector<BasePolicy> out;
    if (!doc_.contains(key)) return out;
    const json& list = doc_[std::string(key)];
    if (!list.is_array())
      return ParseError(absl::StrCat(key, " must be a list"));
    std::set<std::string> names;
    for (const json& p : list) {
      if (!p.is_object()) return ParseError("policy must be an object");
      ASSIGN_OR_RETURN(const std::string type, GetString(p, "type"));
      ASSIGN_OR_RETURN(const std::string name, GetString(p, "name"));
      RETURN_IF_ERROR(CheckIdentifier("policy", name));
      if (!names.insert(name).second) {
        return ValidationError(absl::StrCat("duplicate policy ", name));
      }
      ASSIGN_OR_RETURN(const std::string unit, GetString(p, "unit"));
      RETURN_IF_ERROR(CheckUnit(unit));
      if (type == "custom") {
        ASSIGN_OR_RETURN(BasePolicy policy, ParseCustom(p, name, unit));
        out.push_back(std::move(policy));
      } else if (type == "per_attribute") {
        ASSIGN_OR_RETURN(BasePolicy policy, ParsePerAttribute(p, name, unit));
        out.push_back(std::move(policy));
      } else if (type == "category") {
        ASSIGN_OR_RETURN(BasePolicy policy, ParseCategory(p, name, unit));
        out.push_back(std::move(policy));
      } else {
        return ParseError(absl::StrCat("unknown policy type '", type, "'"));
      }
    }
    return out;
  }

  absl::StatusOr<BasePolicy> ParseCustom(const json& p, const std::string& name,
                                         const std::string& unit) {
    CustomPolicy policy{.name = name, .unit = unit};
    const std::string text = p.value("predicate", std::string("true"));
    ASSIGN_OR_RETURN(policy.predicate, Predicate::Parse(text));
    if (!p.contains("budget"))
      return ParseError("custom policy needs a budget");
    ASSIGN_OR_RETURN(policy.budget, BudgetFromJson(p["budget"]));
    if (p.contains("annotation")) {
      ASSIGN_OR_RETURN(policy.annotation, ParseRank(p["annotation"]));
    }
    return policy;
  }

  absl::StatusOr<BasePolicy> ParsePerAttribute(const json& p,
                                               const std::string& name,
                                               const std::string& unit) {
    PerAttributePolicy policy{.name = name, .unit = unit};
    if (!p.contains("risk_budgets")) {
      return ParseError("per_attribute policy needs risk_budgets");
    }
    ASSIGN_OR_RETURN(policy.risk_budgets, ParseRiskBudgets(p["risk_budgets"]));
    if (p.contains("assignments")) {
      const json& assignments = p["assignments"];
      if (!assignments.is_object()) {
        return ParseError("assignments must be an object");
      }
      for (const auto& [attr, value] : assignments.items()) {
        if (!attribute_set_.contains(attr)) {
          return ValidationError(
              absl::StrCat("unknown attribute '", attr, "'"));
        }
        if (value.is_string()) {
          const std::string risk = value.get<std::string>();
          auto it = policy.risk_budgets.find(risk);
          if (it == policy.risk_budgets.end()) {
            return ValidationError(absl::StrCat("unknown risk level '", risk,
                                                "' for attribute ", attr));
          }
          policy.attribute_risk[attr] = risk;
          policy.attribute_budgets[attr] = it->second;
        } else {
          ASSIGN_OR_RETURN(policy.attribute_budgets[attr],
                           BudgetFromJson(value));
          policy.attribute_risk[attr] = "";
        }
      }
    }
    const std::string default_risk = p.value("default_risk", std::string());
    for (const std::string& attr : set_.attributes) {
      if (policy.attribute_budgets.contains(attr)) continue;
      auto it = policy.risk_budgets.find(default_risk);
      if (default_risk.empty() || it == policy.risk_budgets.end()) {
        return ValidationError(absl::StrCat("attribute ", attr,
                                            " has no budget in policy ", name));
      }
      policy.attribute_risk[attr] = default_risk;
      policy.attribute_budgets[attr] = it->second;
    }
    return policy;
  }

  absl::StatusOr<BasePolicy> ParseCategory(const json& p,
                                           const std::string& name,
                                           const std::string& unit) {
    CategoryPolicy policy{.name = name, .unit = unit};
    if (!p.contains("risk_budgets")) {
      return ParseError("category policy needs risk_budgets");
    }
    ASSIGN_OR_RETURN(policy.risk_budgets, ParseRiskBudgets(p["risk_budgets"]));
    for (const auto& [category, risk] : set_.categories) {
      if (!policy.risk_budgets.contains(risk)) {
        return ValidationError(absl::StrCat("category ", category,
                                            " references unknown risk level '",
                                            risk, "'"));
      }
    }
    if (p.contains("membership")) {
      const json& membership = p["membership"];
      if (!membership.is_object()) {
        return ParseError("membership must be an object");
      }
      for (const auto& [attr, cats] : membership.items()) {
        if (!attribute_set_.contains(attr)) {
          return ValidationError(
              absl::StrCat("unknown attribute '", attr, "'"));
        }
        if (!cats.is_object()) {
          return ParseError("membership entries must map categories to levels");
        }
        for (const auto& [category, level] : cats.items()) {
          if (!category_risk_.contains(category)) {
            return ValidationError(
                absl::StrCat("unknown category '", category, "'"));
          }
          if (!level.is_string()) return ParseError("level must be a string");
          ASSIGN_OR_RETURN(policy.membership[attr][category],
                           ParseLevel(level.get<std::string>()));
        }
      }
    }
    if (p.contains("level_fns")) {
      const json& fns = p["level_fns"];
      if (fns.contains("strong")) {
        ASSIGN_OR_RETURN(policy.strong_fn, BudgetFn::FromJson(fns["strong"]));
      }
      if (fns.contains("weak")) {
        ASSIGN_OR_RETURN(policy.weak_fn, BudgetFn::FromJson(fns["weak"]));
      }
    }
    for (const auto& [risk, budget] : policy.risk_budgets) {
      for (const BudgetFn* fn : {&policy.strong_fn, &policy.weak_fn}) {
        if (auto applied = fn->Apply(budget); !applied.ok()) {
          return ValidationError(absl::StrCat("level function on risk ", risk,
                                              ": ",
                                              applied.status().message()));
        }
      }
    }
    return policy;
  }

  absl::Status ParseExtensionPolicies() {
    if (!doc_.contains("extension_policies")) return absl::OkStatus();
    const json& list = doc_["extension_policies"];
    if (!list.is_array())
      return ParseError("extension_policies must be a list");
    std::set<std::string> names;
    for (const json& p : list) {
      if (!p.is_object())
        return ParseError("extension policy must be an object");
      ExtensionPolicy policy;
      ASSIGN_OR_RETURN(policy.name, GetString(p, "name"));
      RETURN_IF_ERROR(CheckIdentifier("extension policy", policy.name));
      if (!names.insert(policy.name).second) {
        return ValidationError(
            absl::StrCat("duplicate extension policy ", policy.name));
      }
      if (!p.contains("extensions") || !p["extensions"].is_array()) {
        return ParseError("extension policy needs an 'extensions' list");
      }
      std::set<std::string> ext_names;
      for (const json& e : p["extensions"]) {
        if (!e.is_object()) return ParseError("extension must be an object");
        Extension ext;
        ASSIGN_OR_RETURN(ext.name, GetString(e, "name"));
        RETURN_IF_ERROR(CheckIdentifier("extension", ext.name));
        if (!ext_names.insert(ext.name).second) {
          return ValidationError(
              absl::StrCat("duplicate extension ", ext.name));
        }
        ASSIGN_OR_RETURN(ext.predicate,
                         Predicate::Parse(e.value("predicate", "true")));
        if (e.contains("units")) {
          if (!e["units"].is_array()) return ParseError("units must be a list");
          std::set<std::string> units;
          for (const json& u : e["units"]) {
            if (!u.is_string()) return ParseError("unit names must be strings");
            RETURN_IF_ERROR(CheckUnit(u.get<std::string>()));
            units.insert(u.get<std::string>());
          }
          ext.units = std::move(units);
        }
        if (e.contains("budget_fn")) {
          ASSIGN_OR_RETURN(ext.budget_fn, BudgetFn::FromJson(e["budget_fn"]));
        }
        if (!e.contains("rank")) return ParseError("extension needs a rank");
        ASSIGN_OR_RETURN(ext.rank, ParseRank(e["rank"]));
        policy.extensions.push_back(std::move(ext));
      }
      RETURN_IF_ERROR(ValidateExtensionPolicy(policy));
      set_.extension_policies.push_back(std::move(policy));
    }
    return absl::OkStatus();
  }

  static absl::Status ValidateExtensionPolicy(const ExtensionPolicy& policy) {
    const Extension* star = nullptr;
    for (const Extension& ext : policy.extensions) {
      if (ext.predicate.kind() != Predicate::Kind::kTrue) continue;
      if (star != nullptr) {
        return ValidationError(
            absl::StrCat("extension policy ", policy.name,
                         " has more than one catch-all (true) extension"));
      }
      star = &ext;
    }
    if (star == nullptr) {
      return ValidationError(
          absl::StrCat("extension policy ", policy.name,
                       " lacks an extension whose predicate is true"));
    }
    for (const Extension& ext : policy.extensions) {
      if (ext.rank.size() != star->rank.size()) {
        return ValidationError(absl::StrCat("extension ranks in ", policy.name,
                                            " differ in length"));
      }
      if (!TupleLeq(ext.rank, star->rank)) {
        return ValidationError(absl::StrCat(
            "extension ", ext.name,
            " is not ranked below the catch-all extension ", star->name));
      }
    }
    for (const Extension& a : policy.extensions) {
      for (const Extension& b : policy.extensions) {
        if (&a == &b) continue;
        RETURN_IF_ERROR(CheckRankConsistency("extension", a.name, a.predicate,
                                             a.rank, b.name, b.predicate,
                                             b.rank));
      }
    }
    return absl::OkStatus();
  }

  absl::Status CheckCustomAnnotations() const {
    for (const auto* list : {&set_.base_policies, &set_.per_release_policies}) {
      for (const BasePolicy& pa : *list) {
        const auto* a = std::get_if<CustomPolicy>(&pa);
        if (a == nullptr || !a->annotation.has_value()) continue;
        for (const BasePolicy& pb : *list) {
          const auto* b = std::get_if<CustomPolicy>(&pb);
          if (b == nullptr || a == b || !b->annotation.has_value()) continue;
          if (a->annotation->size() != b->annotation->size()) {
            return ValidationError("custom annotations differ in length");
          }
          RETURN_IF_ERROR(CheckRankConsistency(
              "custom policy", a->name, a->predicate, *a->annotation, b->name,
              b->predicate, *b->annotation));
        }
      }
    }
    return absl::OkStatus();
  }

  const json& doc_;
  PolicySet set_;
  std::set<std::string> attribute_set_;
  std::map<std::string, std::string> category_risk_;
};

}  // namespace

absl::string_view MembershipLevelName(MembershipLevel level) {
  switch (level) {
    case MembershipLevel::kMember:
      return "member";
    case MembershipLevel::kStrong:
      return "strong";
    case MembershipLevel::kWeak:
      return "weak";
  }
  return "unknown";
}

const std::string& BasePolicyName(const BasePolicy& policy) {
  return std::visit([](const auto& p) -> const std::string& { return p.name; },
                    policy);
}

absl::StatusOr<PolicySet> ParsePolicySet(const nlohmann::json& document) {
  try {
    return DocumentParser(document).Parse();
  } catch (const nlohmann::json::exception& e) {
    return ParseError(e.what());
  }
}

absl::StatusOr<PolicySet> ParsePolicySetText(absl::string_view text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded())
    return ParseError("policy document is not valid JSON");
  return ParsePolicySet(doc);
}

}  // namespace policy_engine
