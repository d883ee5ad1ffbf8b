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

#include "policy_engine/scenario.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "absl/strings/str_split.h"
#include "gtest/gtest.h"
#include "policy_engine/compiler.h"
#include "policy_engine/report.h"
#include "policy_engine/rule_bundle.h"
#include "policy_engine/rule_poset.h"
#include "policy_engine/serialization.h"
#include "testing/random_policies.h"

namespace policy_engine {
namespace {

namespace fs = std::filesystem;

WorkloadConfig Small(ScenarioKind kind) {
  WorkloadConfig cfg = WorkloadConfig::Desk(kind);
  cfg.rounds = 4;
  cfg.requests_per_round = 20;
  cfg.epsilon_totals = {3, 20};
  return cfg;
}

TEST(ScopeTrackerTest, SumsPerBlockAndConverts) {
  ScopeTracker tracker(4, 1e-6);
  tracker.AddScope("all", "g", 1.0, [](const Mechanism&) { return true; });
  tracker.AddScope("none", "g", 1.0, [](const Mechanism&) { return false; });
  Mechanism m;
  m.cost_by_unit["user"] = PureDp{0.6};
  m.blocks = BlockSelection::WrappingRange(1, 2, 4);
  ReleaseRequest request{.id = "q", .mechanisms = {m, m}};
  ASSERT_TRUE(tracker.Record(request).ok());
  const std::vector<ScopeValue> values = tracker.Snapshot();
  ASSERT_EQ(values.size(), 2u);
  EXPECT_NEAR(values[0].epsilon, 1.2, 1e-6);
  EXPECT_TRUE(values[0].violated);
  EXPECT_EQ(values[1].epsilon, 0);
  EXPECT_FALSE(values[1].violated);
}

TEST(ScenarioTest, StandardBudgetInvertsContextMap) {
  const WorkloadConfig cfg = WorkloadConfig::Desk(ScenarioKind::kContext);
  EXPECT_NEAR(StandardBudget(cfg, 3).value(), 1.7, 1e-12);
  EXPECT_NEAR(StandardBudget(cfg, 12.5).value(), 2.15, 1e-12);
  EXPECT_NEAR(StandardBudget(cfg, 20).value(), 2.5, 1e-12);
}

TEST(ScenarioTest, RunsHaveOneReportPerRound) {
  for (ScenarioKind kind :
       {ScenarioKind::kContext, ScenarioKind::kScope, ScenarioKind::kTime}) {
    const WorkloadConfig cfg = Small(kind);
    for (RunMode mode : {RunMode::kDPolicy, RunMode::kBaseline}) {
      absl::StatusOr<ScenarioRun> run = RunScenario(cfg, mode, 10);
      ASSERT_TRUE(run.ok()) << run.status();
      ASSERT_EQ(run->rounds.size(), 4u);
      double cumulative = 0;
      for (size_t r = 0; r < run->rounds.size(); ++r) {
        const RoundReport& report = run->rounds[r];
        EXPECT_EQ(report.round, static_cast<int>(r + 1));
        EXPECT_LE(report.accepted, report.candidates);
        cumulative += report.utility;
        EXPECT_NEAR(report.cumulative_utility, cumulative, 1e-9);
        EXPECT_FALSE(report.scopes.empty());
      }
      if (mode == RunMode::kDPolicy) {
        EXPECT_EQ(run->ViolationCount(), 0) << ScenarioName(kind);
        EXPECT_GE(run->rules_compiled, run->rules_active);
      } else {
        EXPECT_EQ(run->rules_active, 1u);
      }
    }
  }
}

TEST(ScenarioTest, BudgetUnlocksGradually) {
  const WorkloadConfig cfg = Small(ScenarioKind::kScope);
  absl::StatusOr<ScenarioRun> run = RunScenario(cfg, RunMode::kDPolicy, 10);
  ASSERT_TRUE(run.ok());
  for (size_t r = 1; r < run->rounds.size(); ++r) {
    EXPECT_GE(run->rounds[r].budget_fraction,
              run->rounds[r - 1].budget_fraction);
  }
  EXPECT_NEAR(run->rounds[0].budget_fraction, 1.0 / cfg.unlock_rounds, 1e-12);
}

TEST(ScenarioTest, SameSeedSameRun) {
  const WorkloadConfig cfg = Small(ScenarioKind::kTime);
  auto a = RunSweep(cfg, RunMode::kDPolicy);
  auto b = RunSweep(cfg, RunMode::kDPolicy);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(RoundsCsv(*a), RoundsCsv(*b));
}

TEST(ReportTest, CsvHasOneRowPerScopeAndRound) {
  const WorkloadConfig cfg = Small(ScenarioKind::kTime);
  absl::StatusOr<std::vector<ScenarioRun>> runs =
      RunSweep(cfg, RunMode::kBaseline);
  ASSERT_TRUE(runs.ok());
  size_t expected = 1;
  for (const ScenarioRun& run : *runs) {
    for (const RoundReport& r : run.rounds) expected += r.scopes.size();
  }
  const std::string csv = RoundsCsv(*runs);
  std::vector<std::string> lines = absl::StrSplit(csv, '\n', absl::SkipEmpty());
  EXPECT_EQ(lines.size(), expected);
  EXPECT_EQ(lines[0],
            "scenario,mode,epsilon_total,seed,round,budget_fraction,scope,"
            "group,bound,epsilon,violated,round_utility,cumulative_utility");
  std::vector<std::string> empty =
      absl::StrSplit(RoundsCsv({}), '\n', absl::SkipEmpty());
  EXPECT_EQ(empty.size(), 1u);
}

TEST(ReportTest, EmitAndFormat) {
  const WorkloadConfig cfg = Small(ScenarioKind::kContext);
  absl::StatusOr<std::vector<ScenarioRun>> runs =
      RunSweep(cfg, RunMode::kDPolicy);
  ASSERT_TRUE(runs.ok());
  const fs::path dir = fs::path(::testing::TempDir()) / "report_test";
  fs::remove_all(dir);
  ASSERT_TRUE(EmitReport(*runs, dir.string()).ok());
  EXPECT_TRUE(fs::exists(dir / kRoundsCsv));
  absl::StatusOr<nlohmann::json> summary =
      ReadJsonFile((dir / kSummaryJson).string());
  ASSERT_TRUE(summary.ok());
  ASSERT_EQ((*summary)["runs"].size(), 2u);
  EXPECT_EQ((*summary)["runs"][0]["scenario"], "S1");
  EXPECT_EQ((*summary)["runs"][0]["violations"], 0);
  absl::StatusOr<std::string> text = FormatReport(dir.string());
  ASSERT_TRUE(text.ok());
  EXPECT_NE(text->find("S1"), std::string::npos);
  EXPECT_FALSE(FormatReport((dir / "missing").string()).ok());
}

TEST(RuleBundleTest, JsonRoundTripKeepsDecisions) {
  const UnitRegistry units = testing::UserAndMonthUnits();
  const BlockDomain domain = testing::SmallDomain();
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    absl::StatusOr<RulePoset> poset =
        RulePoset::Build(testing::RandomRules(8, rng), units);
    ASSERT_TRUE(poset.ok());
    const RuleBundle bundle = MakeRuleBundle(*poset, {}, units, domain);
    absl::StatusOr<RuleBundle> back =
        RuleBundleFromJson(nlohmann::json::parse(ToJson(bundle).dump()));
    ASSERT_TRUE(back.ok()) << back.status();
    EXPECT_EQ(back->rules, bundle.rules);
    EXPECT_EQ(back->cover_edges, bundle.cover_edges);
    absl::StatusOr<DecisionPoint> a =
        DecisionPoint::Create(*poset, {}, units, domain);
    absl::StatusOr<DecisionPoint> b = DecisionPointFromBundle(*back);
    ASSERT_TRUE(a.ok() && b.ok());
    const auto trace = testing::RandomTrace(30, domain, rng);
    EXPECT_EQ(*testing::RunTrace(*a, trace), *testing::RunTrace(*b, trace));
  }
}

}  // namespace
}  // namespace policy_engine
