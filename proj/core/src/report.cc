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

#include "policy_engine/report.h"

#include <filesystem>
#include <map>
#include <system_error>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "policy_engine/errors.h"
#include "policy_engine/serialization.h"
#include "policy_engine/status_macros.h"

namespace policy_engine {

using nlohmann::json;

std::string RoundsCsv(const std::vector<ScenarioRun>& runs) {
  std::string csv =
      "scenario,mode,epsilon_total,seed,round,budget_fraction,scope,group,"
      "bound,epsilon,violated,round_utility,cumulative_utility\n";
  for (const ScenarioRun& run : runs) {
    for (const RoundReport& r : run.rounds) {
      for (const ScopeValue& v : r.scopes) {
        absl::StrAppendFormat(
            &csv, "%s,%s,%.10g,%d,%d,%.10g,%s,%s,%.10g,%.10g,%d,%.10g,%.10g\n",
            ScenarioName(run.scenario), RunModeName(run.mode),
            run.epsilon_total, run.seed, r.round, r.budget_fraction, v.scope,
            v.group, v.bound, v.epsilon, v.violated ? 1 : 0, r.utility,
            r.cumulative_utility);
      }
    }
  }
  return csv;
}

json SummaryJson(const std::vector<ScenarioRun>& runs) {
  json out = json::array();
  for (const ScenarioRun& run : runs) {
    int accepted = 0;
    for (const RoundReport& r : run.rounds) accepted += r.accepted;
    json final_scopes = json::array();
    std::map<std::string, json> groups;
    if (!run.rounds.empty()) {
      for (const ScopeValue& v : run.rounds.back().scopes) {
        final_scopes.push_back({{"scope", v.scope},
                                {"group", v.group},
                                {"bound", v.bound},
                                {"epsilon", v.epsilon},
                                {"violated", v.violated}});
        json& g = groups[v.group];
        if (g.is_null() || v.epsilon > g["max_epsilon"].get<double>()) {
          g = {{"max_epsilon", v.epsilon},
               {"bound", v.bound},
               {"scope", v.scope}};
        }
      }
    }
    out.push_back({{"scenario", ScenarioName(run.scenario)},
                   {"mode", RunModeName(run.mode)},
                   {"epsilon_total", run.epsilon_total},
                   {"seed", run.seed},
                   {"rules_compiled", run.rules_compiled},
                   {"rules_active", run.rules_active},
                   {"rounds", run.rounds.size()},
                   {"accepted", accepted},
                   {"total_utility", run.total_utility()},
                   {"violations", run.ViolationCount()},
                   {"groups", groups},
                   {"final", final_scopes}});
  }
  return {{"runs", out}};
}

absl::Status EmitReport(const std::vector<ScenarioRun>& runs,
                        const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return IoError(absl::StrCat("cannot create ", dir, ": ", ec.message()));
  }
  const std::filesystem::path base(dir);
  RETURN_IF_ERROR(WriteTextFile((base / kRoundsCsv).string(), RoundsCsv(runs)));
  return WriteJsonFile((base / kSummaryJson).string(), SummaryJson(runs));
}

absl::StatusOr<std::string> FormatReport(const std::string& dir) {
  ASSIGN_OR_RETURN(
      const json summary,
      ReadJsonFile((std::filesystem::path(dir) / kSummaryJson).string()));
  std::string out;
  try {
    for (const json& run : summary.at("runs")) {
      absl::StrAppendFormat(
          &out,
          "%s %-8s eps_t=%-5g utility=%-10.4g accepted=%-5d "
          "rules=%d/%d violations=%d\n",
          run.at("scenario").get<std::string>(),
          run.at("mode").get<std::string>(),
          run.at("epsilon_total").get<double>(),
          run.at("total_utility").get<double>(), run.at("accepted").get<int>(),
          run.at("rules_active").get<int>(),
          run.at("rules_compiled").get<int>(), run.at("violations").get<int>());
      for (const auto& [group, g] : run.at("groups").items()) {
        const double eps = g.at("max_epsilon").get<double>();
        const double bound = g.at("bound").get<double>();
        absl::StrAppendFormat(&out, "    %-16s max eps %8.4f  bound %8.4f%s\n",
                              group, eps, bound,
                              eps > bound * (1 + 1e-9) ? "  VIOLATED" : "");
      }
    }
  } catch (const json::exception& e) {
    return ParseError(absl::StrCat("summary.json: ", e.what()));
  }
  return out;
}

}  // namespace policy_engine
