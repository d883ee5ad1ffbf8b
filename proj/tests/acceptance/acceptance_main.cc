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

// Acceptance harness: one PASS/FAIL line per criterion, exit status 1 when
// any criterion fails. Tolerances are pinned here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "nlohmann/json.hpp"
#include "policy_engine/accounting.h"
#include "policy_engine/compiler.h"
#include "policy_engine/decision_point.h"
#include "policy_engine/policy_set.h"
#include "policy_engine/rule_poset.h"
#include "policy_engine/scenario.h"
#include "policy_engine/workload.h"
#include "testing/random_policies.h"

namespace policy_engine {
namespace {

using nlohmann::json;

struct Outcome {
  bool pass = true;
  std::string detail;

  void Require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      absl::StrAppend(&detail, detail.empty() ? "" : "; ", "FAILED ", what);
    }
  }
  void Note(const std::string& what) {
    absl::StrAppend(&detail, detail.empty() ? "" : "; ", what);
  }
};

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since)
      .count();
}

Outcome Conversions() {
  Outcome out;
  absl::StatusOr<PrivacyBudget> month =
      GroupPrivacy(ZeroConcentratedDp{0.015}, 31);
  const auto* z = month.ok() ? month->get_if<ZeroConcentratedDp>() : nullptr;
  out.Require(z != nullptr && z->rho == 14.415, "group_privacy 31^2 * 0.015");
  auto tight = ZcdpToAdp(14.415, 1e-6, ZcdpConversion::kTightNumeric);
  auto closed = ZcdpToAdp(14.415, 1e-6, ZcdpConversion::kClosedForm);
  auto small = ZcdpToAdp(0.735, 1e-6, ZcdpConversion::kTightNumeric);
  if (!tight.ok() || !closed.ok() || !small.ok()) {
    out.Require(false, "conversion returned an error");
    return out;
  }
  out.Require(std::abs(tight->epsilon - 41.94) <= 0.5, "tight(14.415)");
  out.Require(std::abs(closed->epsilon - 42.64) <= 0.05, "closed(14.415)");
  out.Require(closed->epsilon >= tight->epsilon, "closed >= tight");
  out.Require(std::abs(small->epsilon - 6.72) <= 0.2, "tight(0.735)");
  out.Note(absl::StrFormat("tight(14.415)=%.4f closed=%.4f tight(0.735)=%.4f",
                           tight->epsilon, closed->epsilon, small->epsilon));
  return out;
}

Outcome RuleCounts() {
  Outcome out;
  const WorkloadConfig cfg = WorkloadConfig::Desk(ScenarioKind::kScope);
  absl::StatusOr<json> doc = ScenarioPolicyDocument(cfg, SampleSchema(cfg), 10);
  absl::StatusOr<json> context = ScenarioPolicyDocument(
      WorkloadConfig::Desk(ScenarioKind::kContext), Schema{}, 10);
  if (!doc.ok() || !context.ok()) {
    out.Require(false, "policy documents");
    return out;
  }
  auto count = [](const json& d) -> std::pair<size_t, size_t> {
    absl::StatusOr<PolicySet> set = ParsePolicySet(d);
    if (!set.ok()) return {0, 0};
    absl::StatusOr<CompiledPolicies> compiled = Compile(*set);
    if (!compiled.ok()) return {0, 0};
    return {compiled->intermediate_rules.size(), compiled->rules.size()};
  };
  const auto [intermediate, plain] = count(*doc);
  (*doc)["extension_policies"] = (*context)["extension_policies"];
  const auto [intermediate2, extended] = count(*doc);
  out.Require(intermediate == 181 && plain == 181, "181 intermediate rules");
  out.Require(intermediate2 == 181 && extended == 362, "362 final rules");
  out.Note(absl::StrCat("intermediate=", intermediate, " final=", extended));
  return out;
}

Outcome Pruning() {
  Outcome out;
  // Hasse fixture.
  const double budgets[] = {7, 7, 7, 5, 7, 3, 5};
  std::vector<Rule> rules;
  for (int i = 0; i < 7; ++i) {
    rules.push_back(Rule{.id = absl::StrCat("r", i + 1),
                         .predicate = Predicate::True(),
                         .unit = "user",
                         .budget = ApproxDp{budgets[i], 1e-7}});
  }
  absl::StatusOr<RulePoset> hasse = RulePoset::FromCoverEdges(
      rules, {{1, 0}, {2, 0}, {3, 0}, {4, 1}, {5, 1}, {5, 2}, {6, 3}});
  std::set<std::string> pruned;
  if (hasse.ok()) {
    for (const PruneRecord& r :
         Prune(*hasse, UnitRegistry::SingleUser()).records) {
      pruned.insert(r.rule_id);
    }
  }
  out.Require(pruned == std::set<std::string>{"r2", "r3", "r5", "r7"},
              "Hasse fixture prunes {r2, r3, r5, r7}");

  // Random posets: pruned and full rule sets decide identically.
  const auto start = std::chrono::steady_clock::now();
  const UnitRegistry units = testing::UserAndMonthUnits();
  const BlockDomain domain = testing::SmallDomain();
  std::mt19937_64 rng(2026);
  int mismatches = 0, errors = 0, control_mismatches = 0;
  size_t decisions = 0, removed = 0, rejected = 0;
  constexpr int kPosets = 1000;
  for (int trial = 0; trial < kPosets; ++trial) {
    absl::StatusOr<RulePoset> poset =
        RulePoset::Build(testing::RandomRules(1 + trial % 12, rng), units);
    if (!poset.ok()) {
      ++errors;
      continue;
    }
    PruneResult result = Prune(*poset, units);
    removed += poset->size() - result.pruned.size();
    auto full = DecisionPoint::Create(*poset, {}, units, domain);
    auto lean = DecisionPoint::Create(result.pruned, {}, units, domain);
    if (!full.ok() || !lean.ok()) {
      ++errors;
      continue;
    }
    const auto trace = testing::RandomTrace(1 + trial % 50, domain, rng);
    auto a = testing::RunTrace(*full, trace);
    auto b = testing::RunTrace(*lean, trace);
    if (!a.ok() || !b.ok()) {
      ++errors;
      continue;
    }
    mismatches += *a != *b;
    // Control: dropping an active rule must be detectable.
    if (result.pruned.size() > 1) {
      std::vector<bool> keep(result.pruned.size(), true);
      keep[trial % keep.size()] = false;
      auto broken = DecisionPoint::Create(result.pruned.Restrict(keep), {},
                                          units, domain);
      auto c = broken.ok() ? testing::RunTrace(*broken, trace)
                           : absl::StatusOr<std::vector<bool>>(broken.status());
      control_mismatches += c.ok() && *c != *a;
    }
    decisions += a->size();
    for (bool x : *a) rejected += !x;
  }
  const double secs = Seconds(start);
  out.Require(errors == 0, "random posets built and ran");
  out.Require(mismatches == 0, "pruned traces match full traces");
  out.Require(control_mismatches > 0, "dropping active rules is detected");
  out.Require(secs < 300, "runtime < 5 min");
  out.Note(absl::StrFormat(
      "%d posets, %zu decisions (%zu rejects), %zu rules pruned, "
      "%d mismatches (control: %d), %.1fs",
      kPosets, decisions, rejected, removed, mismatches, control_mismatches,
      secs));
  return out;
}

Outcome Soundness() {
  Outcome out;
  const UnitRegistry units = testing::UserAndMonthUnits();
  BlockDomain domain = testing::SmallDomain();
  domain.domain_size = 2048;
  std::mt19937_64 rng(4242);
  double worst = -1e300;
  int errors = 0, state_changes = 0;
  size_t rejects = 0;
  constexpr int kTraces = 100;
  for (int trial = 0; trial < kTraces; ++trial) {
    auto poset =
        RulePoset::Build(testing::RandomRules(1 + trial % 12, rng), units);
    if (!poset.ok()) {
      ++errors;
      continue;
    }
    auto dp = DecisionPoint::Create(*poset, {}, units, domain);
    if (!dp.ok()) {
      ++errors;
      continue;
    }
    const auto trace = testing::RandomTrace(50, domain, rng);
    std::vector<bool> accepted;
    for (const testing::TraceEvent& e : trace) {
      if (e.advance_to >= 0) dp->CollapseTime(e.advance_to);
      const FilterState before = dp->state();
      absl::StatusOr<Decision> d = dp->CheckAndCommit(e.request);
      if (!d.ok()) {
        ++errors;
        break;
      }
      accepted.push_back(d->accepted);
      if (!d->accepted) {
        ++rejects;
        state_changes += !(dp->state() == before) ||
                         dp->state().ToJson().dump() != before.ToJson().dump();
      }
    }
    if (accepted.size() != trace.size()) continue;
    auto excess =
        testing::ReplayExcess(poset->rules(), units, domain, trace, accepted);
    if (!excess.ok()) {
      ++errors;
      continue;
    }
    worst = std::max(worst, *excess);
  }
  out.Require(errors == 0, "traces ran");
  out.Require(worst <= 1e-9, "replayed cost within every budget");
  out.Require(state_changes == 0, "rejections leave state unchanged");
  out.Note(absl::StrFormat(
      "%d traces over 2048 blocks, worst relative excess %.3g, %zu rejects",
      kTraces, worst, rejects));
  return out;
}

Outcome Scenarios() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  constexpr uint64_t kSeeds[] = {1, 2, 3, 4, 5};
  std::string worst;
  for (ScenarioKind kind :
       {ScenarioKind::kContext, ScenarioKind::kScope, ScenarioKind::kTime}) {
    const std::string name = ScenarioName(kind);
    // Largest ε/bound over the scenario's policy scopes at the largest ε_t:
    // worst case over seeds for dpolicy, best case for baseline.
    double dpolicy_ratio = 0, baseline_ratio = 1e300;
    auto max_ratio = [kind](const ScenarioRun& run) {
      double r = 0;
      for (const ScopeValue& v : run.rounds.back().scopes) {
        if (v.group == "global" || v.group == "attribute_high") continue;
        if (kind != ScenarioKind::kScope || v.group.starts_with("category")) {
          r = std::max(r, v.epsilon / v.bound);
        }
      }
      return r;
    };
    for (uint64_t seed : kSeeds) {
      WorkloadConfig cfg = WorkloadConfig::Desk(kind);
      cfg.seed = seed;
      auto dpolicy = RunSweep(cfg, RunMode::kDPolicy);
      auto baseline = RunSweep(cfg, RunMode::kBaseline);
      if (!dpolicy.ok() || !baseline.ok()) {
        out.Require(false, absl::StrCat(name, " seed ", seed, " ran"));
        continue;
      }
      const std::string tag = absl::StrCat(name, "/seed", seed, " ");
      dpolicy_ratio = std::max(dpolicy_ratio, max_ratio(dpolicy->back()));
      baseline_ratio = std::min(baseline_ratio, max_ratio(baseline->back()));
      // Policy bounds hold in dpolicy mode.
      for (const ScenarioRun& run : *dpolicy) {
        out.Require(
            run.ViolationCount() == 0,
            absl::StrCat(tag, "dpolicy bounds at eps_t=", run.epsilon_total));
      }
      const ScenarioRun& small = dpolicy->front();
      const ScenarioRun& large = dpolicy->back();
      out.Require(large.total_utility() > small.total_utility(),
                  absl::StrCat(tag, "utility grows with eps_t"));
      // Baseline concentrates loss beyond the policy bounds.
      auto exceeds = [](const ScenarioRun& run, const std::string& group) {
        for (const ScopeValue& v : run.rounds.back().scopes) {
          if (v.group == group && v.violated) return true;
        }
        return false;
      };
      switch (kind) {
        case ScenarioKind::kContext:
          out.Require(exceeds(baseline->back(), "standard"),
                      absl::StrCat(tag, "baseline exceeds standard bound"));
          break;
        case ScenarioKind::kScope:
          for (const ScenarioRun& run : *baseline) {
            if (run.epsilon_total < 15) continue;
            out.Require(exceeds(run, "category_member") ||
                            exceeds(run, "category_strong") ||
                            exceeds(run, "category_weak"),
                        absl::StrCat(tag,
                                     "baseline exceeds a category bound"
                                     " at eps_t=",
                                     run.epsilon_total));
          }
          break;
        case ScenarioKind::kTime:
          out.Require(exceeds(baseline->back(), "month"),
                      absl::StrCat(tag, "baseline exceeds a month bound"));
          break;
      }
    }
    out.Note(
        absl::StrFormat("%s eps/bound at max eps_t: dpolicy<=%.3f "
                        "baseline>=%.3f",
                        name, dpolicy_ratio, baseline_ratio));
  }
  const double secs = Seconds(start);
  out.Require(secs < 600, "runtime < 10 min");
  out.Note(absl::StrFormat("3 scenarios x 5 seeds x 2 modes, %.1fs", secs));
  return out;
}

Outcome Sampling() {
  Outcome out;
  constexpr int kSamples = 100000;
  WorkloadConfig cfg = WorkloadConfig::Desk(ScenarioKind::kContext);
  std::mt19937_64 rng(77);
  double attrs = 0, cats = 0;
  for (int i = 0; i < kSamples; ++i) {
    attrs += SampleAttributes(cfg, rng).size();
    cats += SampleCategories(cfg, rng).size();
  }
  attrs /= kSamples;
  cats /= kSamples;
  // Label rate over ML requests drawn by the generator.
  // One ML type in three: 45 rounds of 10^4 give ~1.5·10^5 ML requests.
  cfg.requests_per_round = kSamples / 10.0;
  cfg.rounds = 45;
  int ml = 0, blackbox = 0;
  auto rounds = GenerateWorkload(cfg);
  if (rounds.ok()) {
    for (const auto& round : *rounds) {
      for (const WorkloadRequest& r : round) {
        if (!cfg.mechanisms[r.type].ml) continue;
        ++ml;
        blackbox +=
            r.request.mechanisms[0].labels.Has(kContextKey, "blackbox_ml");
      }
    }
  }
  const double rate = ml > 0 ? static_cast<double>(blackbox) / ml : 0;
  out.Require(std::abs(attrs - 5) <= 0.1, "attributes/request");
  out.Require(std::abs(cats - 3.5) <= 0.1, "categories/attribute");
  out.Require(ml >= kSamples && std::abs(rate - 0.8) <= 0.02, "blackbox rate");
  out.Note(absl::StrFormat(
      "attributes=%.4f categories=%.4f blackbox=%.4f (%d ML requests)", attrs,
      cats, rate, ml));
  return out;
}

Outcome AuxiliaryRoundTrip() {
  Outcome out;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> sens(0.01, 100);
  std::uniform_real_distribution<double> eps(0.001, 20);
  std::uniform_real_distribution<double> log_delta(-15, -1);
  double worst = 0;
  constexpr int kDraws = 10000;
  for (int i = 0; i < kDraws; ++i) {
    const double d = sens(rng), d_hat = sens(rng), e = eps(rng);
    const double delta = std::pow(10.0, log_delta(rng));
    auto sigma = GaussianSigma(d, e, delta);
    auto aux = sigma.ok() ? EpsilonForAuxiliaryUnit(*sigma, d_hat, delta)
                          : absl::StatusOr<double>(sigma.status());
    if (!aux.ok()) {
      out.Require(false, "conversion error");
      return out;
    }
    const double want = e * d_hat / d;
    worst = std::max(worst, std::abs(*aux - want) / want);
  }
  out.Require(worst <= 1e-9, "relative error <= 1e-9");
  out.Note(
      absl::StrFormat("%d draws, worst relative error %.3g", kDraws, worst));
  return out;
}

int Main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double time_limit;  // seconds
  };
  const std::vector<Criterion> criteria = {
      {"conversion_regressions", Conversions, 1},
      {"rule_count_identity", RuleCounts, 1},
      {"pruning_correctness", Pruning, 300},
      {"decision_point_soundness", Soundness, 0},
      {"scenario_properties", Scenarios, 600},
      {"sampling_statistics", Sampling, 0},
      {"auxiliary_unit_round_trip", AuxiliaryRoundTrip, 0},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome = c.run();
    const double secs = Seconds(start);
    if (c.time_limit > 0 && secs >= c.time_limit) {
      outcome.Require(
          false, absl::StrFormat("runtime %.2fs >= %.0fs", secs, c.time_limit));
    }
    failures += !outcome.pass;
    std::printf("[%s] %s (%.2fs): %s\n", outcome.pass ? "PASS" : "FAIL", c.name,
                secs, outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace policy_engine

int main() { return policy_engine::Main(); }
