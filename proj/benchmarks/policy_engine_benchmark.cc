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

#include <vector>

#include "benchmark/benchmark.h"
#include "policy_engine/accounting.h"
#include "policy_engine/compiler.h"
#include "policy_engine/decision_point.h"
#include "policy_engine/policy_set.h"
#include "policy_engine/rule_poset.h"
#include "policy_engine/scenario.h"
#include "policy_engine/segmented_curve.h"
#include "policy_engine/workload.h"

namespace policy_engine {
namespace {

PolicySet ScopePolicies() {
  const WorkloadConfig cfg = WorkloadConfig::Desk(ScenarioKind::kScope);
  return *ParsePolicySet(*ScenarioPolicyDocument(cfg, SampleSchema(cfg), 10));
}

void BM_TightZcdpConversion(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ZcdpToAdp(14.415, 1e-6, ZcdpConversion::kTightNumeric));
  }
}
BENCHMARK(BM_TightZcdpConversion);

void BM_CalibrateGaussianRho(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(CalibrateGaussianRho(0.75, 1e-9));
  }
}
BENCHMARK(BM_CalibrateGaussianRho);

void BM_CompileAndPruneScope(benchmark::State& state) {
  const PolicySet set = ScopePolicies();
  for (auto _ : state) {
    CompiledPolicies compiled = *Compile(set);
    RulePoset poset = *RulePoset::Build(std::move(compiled.rules), set.units);
    benchmark::DoNotOptimize(Prune(poset, set.units));
  }
}
BENCHMARK(BM_CompileAndPruneScope)->Unit(benchmark::kMillisecond);

// One round of scope-scenario requests against a fresh decision point; the
// argument toggles skip traversal of the rule poset.
void BM_CheckAndCommitScope(benchmark::State& state) {
  const PolicySet set = ScopePolicies();
  CompiledPolicies compiled = *Compile(set);
  RulePoset poset = *RulePoset::Build(std::move(compiled.rules), set.units);
  RulePoset pruned = Prune(poset, set.units).pruned;
  WorkloadConfig cfg = WorkloadConfig::Desk(ScenarioKind::kScope);
  cfg.rounds = 1;
  cfg.requests_per_round = 200;
  const auto requests = (*GenerateWorkload(cfg))[0];
  for (auto _ : state) {
    state.PauseTiming();
    DecisionPoint dp =
        *DecisionPoint::Create(pruned, {}, set.units, set.block_domain);
    dp.set_skip_traversal(state.range(0) != 0);
    state.ResumeTiming();
    for (const WorkloadRequest& r : requests) {
      benchmark::DoNotOptimize(dp.CheckAndCommit(r.request));
    }
  }
  state.SetItemsProcessed(state.iterations() * requests.size());
}
BENCHMARK(BM_CheckAndCommitScope)
    ->Arg(0)
    ->Arg(1)
    ->Unit(benchmark::kMillisecond);

void BM_SegmentedCurveAdd(benchmark::State& state) {
  const int64_t domain = state.range(0);
  const size_t n = AlphaOrders::Default().size();
  const RdpCurve cost = RdpCurve::Constant(0.01, n);
  for (auto _ : state) {
    SegmentedCurve curve(domain, n);
    for (int64_t i = 0; i < 256; ++i) {
      const int64_t start = (i * 7919) % domain;
      curve.Add(BlockSelection::WrappingRange(start, domain / 8, domain)
                    .Resolve(domain),
                cost);
    }
    benchmark::DoNotOptimize(curve.num_segments());
  }
}
BENCHMARK(BM_SegmentedCurveAdd)->Arg(2048)->Arg(204800);

void BM_ScenarioRunDesk(benchmark::State& state) {
  const WorkloadConfig cfg =
      WorkloadConfig::Desk(static_cast<ScenarioKind>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(RunScenario(cfg, RunMode::kDPolicy, 10));
  }
}
BENCHMARK(BM_ScenarioRunDesk)
    ->Arg(0)
    ->Arg(1)
    ->Arg(2)
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace policy_engine

BENCHMARK_MAIN();
