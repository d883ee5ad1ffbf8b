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

#include "policy_engine/rule_bundle.h"

#include "absl/strings/str_cat.h"
#include "policy_engine/errors.h"
#include "policy_engine/serialization.h"
#include "policy_engine/status_macros.h"

namespace policy_engine {

using nlohmann::json;

RuleBundle MakeRuleBundle(const RulePoset& poset,
                          std::vector<Rule> per_release_rules,
                          const UnitRegistry& units, BlockDomain domain) {
  RuleBundle bundle;
  bundle.rules = poset.rules();
  for (size_t j = 0; j < poset.size(); ++j) {
    for (size_t i : poset.LowerCover(j)) bundle.cover_edges.emplace_back(i, j);
  }
  bundle.per_release_rules = std::move(per_release_rules);
  bundle.units = units.units();
  bundle.domain = std::move(domain);
  return bundle;
}

json ToJson(const RuleBundle& bundle) {
  json units = json::array();
  for (const PrivacyUnit& u : bundle.units) units.push_back(ToJson(u));
  json edges = json::array();
  for (const auto& [lower, upper] : bundle.cover_edges) {
    edges.push_back({lower, upper});
  }
  json domain = {
      {"partitioning_attributes", bundle.domain.partitioning_attributes},
      {"size", bundle.domain.domain_size}};
  if (bundle.domain.time_axis.has_value()) {
    domain["time_axis"] = {
        {"granular_window", bundle.domain.time_axis->granular_window},
        {"horizon", bundle.domain.time_axis->horizon}};
  }
  return {{"rules", RulesToJson(bundle.rules)},
          {"cover_edges", edges},
          {"per_release_rules", RulesToJson(bundle.per_release_rules)},
          {"units", units},
          {"block_domain", domain}};
}

absl::StatusOr<RuleBundle> RuleBundleFromJson(const json& j) {
  if (!j.is_object()) return ParseError("rule bundle must be an object");
  RuleBundle bundle;
  try {
    ASSIGN_OR_RETURN(bundle.rules, RulesFromJson(j.at("rules")));
    for (const json& e : j.at("cover_edges")) {
      bundle.cover_edges.emplace_back(e.at(0).get<size_t>(),
                                      e.at(1).get<size_t>());
    }
    if (j.contains("per_release_rules")) {
      ASSIGN_OR_RETURN(bundle.per_release_rules,
                       RulesFromJson(j["per_release_rules"]));
    }
    for (const json& u : j.at("units")) {
      ASSIGN_OR_RETURN(PrivacyUnit unit, PrivacyUnitFromJson(u));
      bundle.units.push_back(std::move(unit));
    }
    const json& d = j.at("block_domain");
    bundle.domain.partitioning_attributes =
        d.value("partitioning_attributes", std::vector<std::string>());
    bundle.domain.domain_size = d.value("size", int64_t{1});
    if (d.contains("time_axis")) {
      bundle.domain.time_axis =
          TimeAxis{d["time_axis"].at("granular_window").get<int64_t>(),
                   d["time_axis"].at("horizon").get<int64_t>()};
    }
  } catch (const json::exception& e) {
    return ParseError(absl::StrCat("rule bundle: ", e.what()));
  }
  return bundle;
}

absl::StatusOr<DecisionPoint> DecisionPointFromBundle(
    const RuleBundle& bundle) {
  ASSIGN_OR_RETURN(UnitRegistry units, UnitRegistry::Create(bundle.units));
  ASSIGN_OR_RETURN(RulePoset poset,
                   RulePoset::FromCoverEdges(bundle.rules, bundle.cover_edges));
  return DecisionPoint::Create(std::move(poset), bundle.per_release_rules,
                               std::move(units), bundle.domain);
}

}  // namespace policy_engine
