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

// Scenario runs: greedy allocation of a workload under a compiled policy
// set (dpolicy mode) or under one global filter (baseline mode), with an
// independent per-scope cost tracker that recomputes cumulative ε.

#ifndef POLICY_ENGINE_SCENARIO_H_
#define POLICY_ENGINE_SCENARIO_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"
#include "policy_engine/alpha_orders.h"
#include "policy_engine/release_request.h"
#include "policy_engine/workload.h"

namespace policy_engine {

enum class RunMode { kDPolicy, kBaseline };

const char* RunModeName(RunMode mode);
absl::StatusOr<RunMode> ParseRunMode(const std::string& name);

// The policy document a scenario enforces at total budget ε_t.
absl::StatusOr<nlohmann::json> ScenarioPolicyDocument(const WorkloadConfig& cfg,
                                                      const Schema& schema,
                                                      double epsilon_total);

// Standard-context budget whose blackbox mapping equals ε_t.
absl::StatusOr<double> StandardBudget(const WorkloadConfig& cfg,
                                      double epsilon_total);

struct ScopeValue {
  std::string scope;
  // Scope group used in summaries, e.g. "category_member" or "month".
  std::string group;
  double bound = 0;
  double epsilon = 0;
  bool violated = false;
};

struct RoundReport {
  int round = 0;
  double budget_fraction = 0;
  int candidates = 0;
  int accepted = 0;
  double utility = 0;
  double cumulative_utility = 0;
  std::vector<ScopeValue> scopes;
};

struct ScenarioRun {
  ScenarioKind scenario = ScenarioKind::kContext;
  RunMode mode = RunMode::kDPolicy;
  double epsilon_total = 0;
  uint64_t seed = 0;
  size_t rules_compiled = 0;
  size_t rules_active = 0;
  std::vector<RoundReport> rounds;

  double total_utility() const {
    return rounds.empty() ? 0 : rounds.back().cumulative_utility;
  }
  // Largest final ε over scopes of `group`; 0 when there are none.
  double MaxFinalEpsilon(const std::string& group) const;
  int ViolationCount() const;
};

// Cumulative privacy loss per named scope, kept per block (and implicitly
// per time step: a scope matches one time step at most). Works from the
// mechanisms' declared costs and its own RDP-to-ADP conversion, sharing no
// state with the decision point.
class ScopeTracker {
 public:
  using Matcher = std::function<bool(const Mechanism&)>;

  ScopeTracker(int64_t domain_size, double delta,
               const AlphaOrders& orders = AlphaOrders::Default());

  void AddScope(std::string name, std::string group, double bound,
                Matcher matches);
  // Charges every mechanism of `request` to the scopes it matches.
  absl::Status Record(const ReleaseRequest& request);
  std::vector<ScopeValue> Snapshot() const;

  size_t num_scopes() const { return scopes_.size(); }

 private:
  struct Scope {
    std::string name;
    std::string group;
    double bound;
    Matcher matches;
    // Difference array over blocks: (domain_size + 1) × orders.
    std::vector<double> diff;
  };

  int64_t domain_size_;
  std::vector<double> log_term_;  // ln(1/δ)/(α − 1) per order
  const AlphaOrders& orders_;
  std::vector<Scope> scopes_;
};

// Scopes reported for the scenario at total budget ε_t.
absl::StatusOr<ScopeTracker> MakeScenarioTracker(const WorkloadConfig& cfg,
                                                 const Schema& schema,
                                                 double epsilon_total);

absl::StatusOr<ScenarioRun> RunScenario(const WorkloadConfig& cfg, RunMode mode,
                                        double epsilon_total);

// One run per cfg.epsilon_totals entry.
absl::StatusOr<std::vector<ScenarioRun>> RunSweep(const WorkloadConfig& cfg,
                                                  RunMode mode);

}  // namespace policy_engine

#endif  // POLICY_ENGINE_SCENARIO_H_
