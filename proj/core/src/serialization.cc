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

#include "policy_engine/serialization.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "policy_engine/errors.h"
#include "policy_engine/status_macros.h"

namespace policy_engine {
namespace {

absl::Status RequireObject(const Json& j, absl::string_view what) {
  if (!j.is_object()) {
    return ParseError(absl::StrCat(what, " must be a JSON object"));
  }
  return absl::OkStatus();
}

// Runs `body`, mapping nlohmann type/range errors to ParseError.
template <typename Fn>
auto Guarded(absl::string_view what, Fn body) -> decltype(body()) {
  try {
    return body();
  } catch (const Json::exception& e) {
    return ParseError(absl::StrCat(what, ": ", e.what()));
  }
}

}  // namespace

Json ToJson(const RdpCurve& curve) {
  return Json(
      std::vector<double>(curve.values().begin(), curve.values().end()));
}

Json ToJson(const PrivacyBudget& budget) {
  Json j;
  j["type"] = std::string(BudgetVariantName(budget.variant()));
  if (const auto* b = budget.get_if<PureDp>()) {
    j["epsilon"] = b->epsilon;
  } else if (const auto* b = budget.get_if<ApproxDp>()) {
    j["epsilon"] = b->epsilon;
    j["delta"] = b->delta;
  } else if (const auto* b = budget.get_if<RenyiDp>()) {
    j["curve"] = ToJson(b->curve);
  } else if (const auto* b = budget.get_if<ZeroConcentratedDp>()) {
    j["rho"] = b->rho;
  }
  return j;
}

Json ToJson(const LabelSet& labels) {
  Json j = Json::object();
  for (const auto& [key, values] : labels.entries()) {
    j[key] = Json(std::vector<std::string>(values.begin(), values.end()));
  }
  return j;
}

Json ToJson(const BlockSelection& blocks) {
  if (blocks.is_all()) return "all";
  Json j = Json::array();
  for (const BlockInterval& interval : blocks.intervals()) {
    j.push_back({interval.begin, interval.end});
  }
  return j;
}

Json ToJson(const Mechanism& mechanism) {
  Json j;
  j["labels"] = ToJson(mechanism.labels);
  Json cost = Json::object();
  for (const auto& [unit, budget] : mechanism.cost_by_unit) {
    cost[unit] = ToJson(budget);
  }
  j["cost"] = std::move(cost);
  j["blocks"] = ToJson(mechanism.blocks);
  if (mechanism.time_step.has_value()) j["time_step"] = *mechanism.time_step;
  return j;
}

Json ToJson(const ReleaseRequest& request) {
  Json j;
  j["id"] = request.id;
  j["utility"] = request.utility;
  Json mechanisms = Json::array();
  for (const Mechanism& m : request.mechanisms) mechanisms.push_back(ToJson(m));
  j["mechanisms"] = std::move(mechanisms);
  return j;
}

Json ToJson(const PrivacyUnit& unit) {
  Json j;
  j["name"] = unit.name;
  j["group_factor_to"] = unit.group_factor_to;
  j["ord_above"] =
      std::vector<std::string>(unit.ord_above.begin(), unit.ord_above.end());
  j["time_based"] = unit.time_based;
  return j;
}

Json ToJson(const Provenance& provenance) {
  Json j;
  j["base_policy"] = provenance.base_policy;
  j["base_rule_index"] = provenance.base_rule_index;
  Json choices = Json::array();
  for (const auto& [policy, choice] : provenance.extension_choices) {
    choices.push_back({{"policy", policy}, {"extension", choice}});
  }
  j["extension_choices"] = std::move(choices);
  return j;
}

Json ToJson(const OrderKey& key) {
  Json j;
  j["base_id"] = key.base_id;
  j["base_predicate"] = key.base_predicate.ToString();
  if (key.base_annotation.has_value()) {
    j["base_annotation"] = *key.base_annotation;
  }
  j["extension_ranks"] = key.extension_ranks;
  return j;
}

Json ToJson(const Rule& rule) {
  Json j;
  j["id"] = rule.id;
  j["predicate"] = rule.predicate.ToString();
  j["unit"] = rule.unit;
  j["budget"] = ToJson(rule.budget);
  j["provenance"] = ToJson(rule.provenance);
  if (rule.order_key.has_value()) j["order_key"] = ToJson(*rule.order_key);
  return j;
}

absl::StatusOr<RdpCurve> RdpCurveFromJson(const Json& j) {
  return Guarded("rdp curve", [&]() -> absl::StatusOr<RdpCurve> {
    return RdpCurve(j.get<std::vector<double>>());
  });
}

absl::StatusOr<PrivacyBudget> BudgetFromJson(const Json& j,
                                             const AlphaOrders* orders) {
  RETURN_IF_ERROR(RequireObject(j, "budget"));
  ASSIGN_OR_RETURN(
      PrivacyBudget budget,
      Guarded("budget", [&]() -> absl::StatusOr<PrivacyBudget> {
        const std::string type = j.at("type").get<std::string>();
        if (type == "pure") return PureDp{j.at("epsilon").get<double>()};
        if (type == "adp") {
          return ApproxDp{j.at("epsilon").get<double>(),
                          j.at("delta").get<double>()};
        }
        if (type == "rdp") {
          ASSIGN_OR_RETURN(RdpCurve curve, RdpCurveFromJson(j.at("curve")));
          return RenyiDp{std::move(curve)};
        }
        if (type == "zcdp") {
          return ZeroConcentratedDp{j.at("rho").get<double>()};
        }
        return ParseError(absl::StrCat("unknown budget type '", type, "'"));
      }));
  RETURN_IF_ERROR(budget.Validate(orders));
  return budget;
}

absl::StatusOr<LabelSet> LabelSetFromJson(const Json& j) {
  RETURN_IF_ERROR(RequireObject(j, "labels"));
  return Guarded("labels", [&]() -> absl::StatusOr<LabelSet> {
    LabelSet labels;
    for (const auto& [key, values] : j.items()) {
      for (const std::string& value : values.get<std::vector<std::string>>()) {
        if (absl::Status s = labels.Add(key, value); !s.ok()) {
          return ParseError(s.message());
        }
      }
    }
    return labels;
  });
}

absl::StatusOr<BlockSelection> BlockSelectionFromJson(const Json& j) {
  if (j.is_string() && j.get<std::string>() == "all") {
    return BlockSelection::All();
  }
  if (!j.is_array()) {
    return ParseError("blocks must be \"all\" or a list of [begin, end]");
  }
  ASSIGN_OR_RETURN(
      std::vector<BlockInterval> intervals,
      Guarded("blocks", [&]() -> absl::StatusOr<std::vector<BlockInterval>> {
        std::vector<BlockInterval> out;
        for (const Json& pair : j) {
          if (!pair.is_array() || pair.size() != 2) {
            return ParseError("block interval must be [begin, end]");
          }
          out.push_back({pair[0].get<int64_t>(), pair[1].get<int64_t>()});
        }
        return out;
      }));
  auto selection = BlockSelection::FromIntervals(std::move(intervals));
  if (!selection.ok()) return ParseError(selection.status().message());
  return selection;
}

absl::StatusOr<Mechanism> MechanismFromJson(const Json& j) {
  RETURN_IF_ERROR(RequireObject(j, "mechanism"));
  Mechanism m;
  if (j.contains("labels")) {
    ASSIGN_OR_RETURN(m.labels, LabelSetFromJson(j["labels"]));
  }
  if (j.contains("cost")) {
    RETURN_IF_ERROR(RequireObject(j["cost"], "mechanism cost"));
    for (const auto& [unit, budget] : j["cost"].items()) {
      ASSIGN_OR_RETURN(m.cost_by_unit[unit], BudgetFromJson(budget));
    }
  }
  if (j.contains("blocks")) {
    ASSIGN_OR_RETURN(m.blocks, BlockSelectionFromJson(j["blocks"]));
  }
  if (j.contains("time_step") && !j["time_step"].is_null()) {
    ASSIGN_OR_RETURN(m.time_step,
                     Guarded("time_step", [&]() -> absl::StatusOr<int64_t> {
                       return j["time_step"].get<int64_t>();
                     }));
  }
  return m;
}

absl::StatusOr<ReleaseRequest> ReleaseRequestFromJson(const Json& j) {
  RETURN_IF_ERROR(RequireObject(j, "request"));
  ReleaseRequest request;
  RETURN_IF_ERROR(Guarded("request", [&]() -> absl::Status {
    request.id = j.value("id", std::string());
    request.utility = j.value("utility", 0.0);
    if (!j.contains("mechanisms") || !j["mechanisms"].is_array()) {
      return ParseError("request needs a 'mechanisms' list");
    }
    return absl::OkStatus();
  }));
  for (const Json& m : j["mechanisms"]) {
    ASSIGN_OR_RETURN(Mechanism mechanism, MechanismFromJson(m));
    request.mechanisms.push_back(std::move(mechanism));
  }
  if (request.utility < 0) return ParseError("utility must be >= 0");
  return request;
}

absl::StatusOr<PrivacyUnit> PrivacyUnitFromJson(const Json& j) {
  RETURN_IF_ERROR(RequireObject(j, "unit"));
  return Guarded("unit", [&]() -> absl::StatusOr<PrivacyUnit> {
    PrivacyUnit unit;
    unit.name = j.at("name").get<std::string>();
    if (j.contains("group_factor_to")) {
      unit.group_factor_to =
          j["group_factor_to"].get<std::map<std::string, int>>();
    }
    if (j.contains("ord_above")) {
      for (const std::string& u :
           j["ord_above"].get<std::vector<std::string>>()) {
        unit.ord_above.insert(u);
      }
    }
    unit.time_based = j.value("time_based", false);
    return unit;
  });
}

absl::StatusOr<Provenance> ProvenanceFromJson(const Json& j) {
  RETURN_IF_ERROR(RequireObject(j, "provenance"));
  return Guarded("provenance", [&]() -> absl::StatusOr<Provenance> {
    Provenance p;
    p.base_policy = j.at("base_policy").get<std::string>();
    p.base_rule_index = j.value("base_rule_index", size_t{0});
    if (j.contains("extension_choices")) {
      for (const Json& c : j["extension_choices"]) {
        p.extension_choices.emplace_back(c.at("policy").get<std::string>(),
                                         c.at("extension").get<std::string>());
      }
    }
    return p;
  });
}

absl::StatusOr<OrderKey> OrderKeyFromJson(const Json& j) {
  RETURN_IF_ERROR(RequireObject(j, "order_key"));
  OrderKey key;
  std::string base_predicate;
  RETURN_IF_ERROR(Guarded("order_key", [&]() -> absl::Status {
    key.base_id = j.at("base_id").get<size_t>();
    base_predicate = j.at("base_predicate").get<std::string>();
    if (j.contains("base_annotation")) {
      key.base_annotation = j["base_annotation"].get<OrderTuple>();
    }
    key.extension_ranks = j.value("extension_ranks", std::vector<OrderTuple>());
    return absl::OkStatus();
  }));
  ASSIGN_OR_RETURN(key.base_predicate, Predicate::Parse(base_predicate));
  return key;
}

absl::StatusOr<Rule> RuleFromJson(const Json& j) {
  RETURN_IF_ERROR(RequireObject(j, "rule"));
  Rule rule;
  std::string predicate;
  RETURN_IF_ERROR(Guarded("rule", [&]() -> absl::Status {
    rule.id = j.at("id").get<std::string>();
    predicate = j.value("predicate", std::string("true"));
    rule.unit = j.at("unit").get<std::string>();
    return absl::OkStatus();
  }));
  ASSIGN_OR_RETURN(rule.predicate, Predicate::Parse(predicate));
  if (!j.contains("budget")) return ParseError("rule needs a 'budget'");
  ASSIGN_OR_RETURN(rule.budget, BudgetFromJson(j["budget"]));
  if (j.contains("provenance")) {
    ASSIGN_OR_RETURN(rule.provenance, ProvenanceFromJson(j["provenance"]));
  }
  if (j.contains("order_key")) {
    ASSIGN_OR_RETURN(rule.order_key, OrderKeyFromJson(j["order_key"]));
  }
  return rule;
}

Json RulesToJson(const std::vector<Rule>& rules) {
  Json j = Json::array();
  for (const Rule& rule : rules) j.push_back(ToJson(rule));
  return j;
}

absl::StatusOr<std::vector<Rule>> RulesFromJson(const Json& j) {
  if (!j.is_array()) return ParseError("rules must be a JSON list");
  std::vector<Rule> rules;
  rules.reserve(j.size());
  for (const Json& r : j) {
    ASSIGN_OR_RETURN(Rule rule, RuleFromJson(r));
    rules.push_back(std::move(rule));
  }
  return rules;
}

absl::StatusOr<Json> ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return IoError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  Json j = Json::parse(buffer.str(), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    return ParseError(absl::StrCat(path, " is not valid JSON"));
  }
  return j;
}

absl::Status WriteJsonFile(const std::string& path, const Json& j) {
  return WriteTextFile(path, j.dump(2) + "\n");
}

absl::Status WriteTextFile(const std::string& path, const std::string& text) {
  const std::filesystem::path parent =
      std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  if (ec) return IoError(absl::StrCat("cannot create ", parent.string()));
  std::ofstream out(path, std::ios::trunc);
  if (!out) return IoError(absl::StrCat("cannot write ", path));
  out << text;
  out.close();
  if (!out) return IoError(absl::StrCat("write failed for ", path));
  return absl::OkStatus();
}

}  // namespace policy_engine
