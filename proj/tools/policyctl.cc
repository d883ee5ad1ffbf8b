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

// policyctl: compile policy documents, check requests against a compiled
// rule set, and run the evaluation scenarios.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "policy_engine/compiler.h"
#include "policy_engine/decision_point.h"
#include "policy_engine/policy_set.h"
#include "policy_engine/report.h"
#include "policy_engine/rule_bundle.h"
#include "policy_engine/rule_poset.h"
#include "policy_engine/scenario.h"
#include "policy_engine/serialization.h"
#include "policy_engine/status_macros.h"
#include "policy_engine/workload.h"

namespace policy_engine {
namespace {

using nlohmann::json;

struct CompileArgs {
  std::string policies;
  std::string output;
  std::string report;
  std::string dot;
};

absl::Status RunCompile(const CompileArgs& args) {
  ASSIGN_OR_RETURN(const json doc, ReadJsonFile(args.policies));
  ASSIGN_OR_RETURN(const PolicySet set, ParsePolicySet(doc));
  ASSIGN_OR_RETURN(CompiledPolicies compiled, Compile(set));
  const size_t intermediate = compiled.intermediate_rules.size();
  PosetBuildStats stats;
  ASSIGN_OR_RETURN(RulePoset poset, RulePoset::Build(std::move(compiled.rules),
                                                     set.units, &stats));
  PruneResult pruned = Prune(poset, set.units);
  const RuleBundle bundle =
      MakeRuleBundle(pruned.pruned, std::move(compiled.per_release_rules),
                     set.units, set.block_domain);
  RETURN_IF_ERROR(WriteJsonFile(args.output, ToJson(bundle)));

  json records = json::array();
  for (const PruneRecord& r : pruned.records) {
    records.push_back({{"rule", r.rule_id},
                       {"pruned_by", r.pruned_by},
                       {"implied_budget", ToJson(r.implied_budget)}});
  }
  const json report = {
      {"intermediate_rules", intermediate},
      {"final_rules", poset.size()},
      {"active_rules", pruned.pruned.size()},
      {"pruned_rules", poset.size() - pruned.pruned.size()},
      {"poset_stats",
       {{"rule_pairs", stats.rule_pairs},
        {"base_comparisons", stats.base_comparisons},
        {"extension_comparisons", stats.extension_comparisons}}},
      {"pruned", records}};
  std::string report_path = args.report;
  if (report_path.empty()) {
    report_path = std::filesystem::path(args.output)
                      .replace_extension(".prune.json")
                      .string();
  }
  RETURN_IF_ERROR(WriteJsonFile(report_path, report));
  if (!args.dot.empty()) {
    RETURN_IF_ERROR(WriteTextFile(args.dot, poset.ToDot(&pruned.active)));
  }
  std::cout << absl::StrFormat(
      "compiled %d intermediate -> %d final rules, %d active after pruning\n",
      intermediate, poset.size(), pruned.pruned.size());
  return absl::OkStatus();
}

struct CheckArgs {
  std::string rules;
  std::string state;
  std::string request;
  std::optional<int64_t> now;
  double fraction = 1.0;
};

absl::Status RunCheck(const CheckArgs& args) {
  ASSIGN_OR_RETURN(const json bundle_json, ReadJsonFile(args.rules));
  ASSIGN_OR_RETURN(const RuleBundle bundle, RuleBundleFromJson(bundle_json));
  ASSIGN_OR_RETURN(DecisionPoint dp, DecisionPointFromBundle(bundle));
  if (std::filesystem::exists(args.state)) {
    ASSIGN_OR_RETURN(const json state, ReadJsonFile(args.state));
    RETURN_IF_ERROR(dp.LoadState(state));
  }
  if (args.now.has_value()) dp.CollapseTime(*args.now);
  RETURN_IF_ERROR(dp.SetBudgetFraction(args.fraction));
  ASSIGN_OR_RETURN(const json request_json, ReadJsonFile(args.request));
  ASSIGN_OR_RETURN(const ReleaseRequest request,
                   ReleaseRequestFromJson(request_json));
  ASSIGN_OR_RETURN(const Decision decision, dp.CheckAndCommit(request));
  if (decision.accepted) {
    std::cout << "ACCEPT " << request.id << "\n";
    RETURN_IF_ERROR(WriteJsonFile(args.state, dp.state().ToJson()));
  } else {
    std::cout << "REJECT " << request.id << " by " << decision.rejected_by
              << (decision.per_release ? " (per-release)" : "") << "\n";
  }
  ASSIGN_OR_RETURN(const auto headroom, dp.Headroom());
  for (const auto& [rule, slack] : headroom) {
    std::cout << absl::StrFormat("  %-48s headroom %.6g\n", rule, slack);
  }
  return absl::OkStatus();
}

struct SimulateArgs {
  std::string config;
  std::string mode;
  std::string out;
  std::optional<uint64_t> seed;
};

absl::Status RunSimulate(const SimulateArgs& args) {
  ASSIGN_OR_RETURN(const json cfg_json, ReadJsonFile(args.config));
  ASSIGN_OR_RETURN(WorkloadConfig cfg, WorkloadConfig::FromJson(cfg_json));
  if (args.seed.has_value()) cfg.seed = *args.seed;
  ASSIGN_OR_RETURN(const RunMode mode, ParseRunMode(args.mode));
  ASSIGN_OR_RETURN(const std::vector<ScenarioRun> runs, RunSweep(cfg, mode));
  RETURN_IF_ERROR(EmitReport(runs, args.out));
  for (const ScenarioRun& run : runs) {
    std::cout << absl::StrFormat("%s %s eps_t=%g utility=%.4g violations=%d\n",
                                 ScenarioName(run.scenario),
                                 RunModeName(run.mode), run.epsilon_total,
                                 run.total_utility(), run.ViolationCount());
  }
  return absl::OkStatus();
}

absl::Status RunReport(const std::string& dir) {
  ASSIGN_OR_RETURN(const std::string text, FormatReport(dir));
  std::cout << text;
  return absl::OkStatus();
}

struct ConfigArgs {
  std::string scenario;
  bool full = false;
  std::string output;
  std::optional<double> policy_epsilon;
};

// Writes a scenario config, or with --policy-epsilon the policy document
// the scenario compiles at that total budget.
absl::Status RunConfig(const ConfigArgs& args) {
  ASSIGN_OR_RETURN(const ScenarioKind kind, ParseScenarioName(args.scenario));
  const WorkloadConfig cfg =
      args.full ? WorkloadConfig::Full(kind) : WorkloadConfig::Desk(kind);
  if (!args.policy_epsilon.has_value()) {
    return WriteJsonFile(args.output, cfg.ToJson());
  }
  ASSIGN_OR_RETURN(
      const json doc,
      ScenarioPolicyDocument(cfg, SampleSchema(cfg), *args.policy_epsilon));
  return WriteJsonFile(args.output, doc);
}

int Finish(const absl::Status& status) {
  if (status.ok()) return 0;
  std::cerr << "error: " << status.message() << "\n";
  return 1;
}

}  // namespace
}  // namespace policy_engine

int main(int argc, char** argv) {
  using namespace policy_engine;  // NOLINT
  CLI::App app{"Differential-privacy policy compiler and decision point"};
  app.require_subcommand(1);

  CompileArgs compile;
  auto* c = app.add_subcommand("compile", "Compile and prune a policy set");
  c->add_option("--policies", compile.policies, "Policy document (JSON)")
      ->required();
  c->add_option("-o,--output", compile.output, "Rule bundle to write")
      ->required();
  c->add_option("--report", compile.report,
                "Pruning report (default: <output>.prune.json)");
  c->add_option("--dot", compile.dot, "Hasse diagram in DOT");

  CheckArgs check;
  auto* k = app.add_subcommand("check", "Check and commit one request");
  k->add_option("--rules", check.rules, "Rule bundle")->required();
  k->add_option("--state", check.state, "Filter state (created if missing)")
      ->required();
  k->add_option("--request", check.request, "Release request (JSON)")
      ->required();
  k->add_option("--now", check.now, "Advance the time clock first");
  k->add_option("--fraction", check.fraction, "Unlocked budget fraction")
      ->check(CLI::Range(0.0, 1.0));

  SimulateArgs simulate;
  auto* s = app.add_subcommand("simulate", "Run a scenario sweep");
  s->add_option("--config", simulate.config, "Workload config (JSON)")
      ->required();
  s->add_option("--mode", simulate.mode, "dpolicy or baseline")
      ->required()
      ->check(CLI::IsMember({"dpolicy", "baseline"}));
  s->add_option("--out", simulate.out, "Output directory")->required();
  s->add_option("--seed", simulate.seed, "Override the config seed");

  std::string report_dir;
  auto* r = app.add_subcommand("report", "Summarize a simulation directory");
  r->add_option("--in", report_dir, "Directory written by simulate")
      ->required();

  ConfigArgs config;
  auto* g = app.add_subcommand("config", "Write a scenario config or policy");
  g->add_option("--scenario", config.scenario, "S1, S2 or S3")->required();
  g->add_flag("--full", config.full, "Full-size parameters");
  g->add_option("--policy-epsilon", config.policy_epsilon,
                "Write the scenario policy document at this total budget");
  g->add_option("-o,--output", config.output, "File to write")->required();

  CLI11_PARSE(app, argc, argv);

  if (c->parsed()) return Finish(RunCompile(compile));
  if (k->parsed()) return Finish(RunCheck(check));
  if (s->parsed()) return Finish(RunSimulate(simulate));
  if (r->parsed()) return Finish(RunReport(report_dir));
  if (g->parsed()) return Finish(RunConfig(config));
  return 1;
}
