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

// Random rule sets, request traces and a replay oracle shared by the
// property tests and the acceptance harness.

#ifndef POLICY_ENGINE_TESTS_TESTING_RANDOM_POLICIES_H_
#define POLICY_ENGINE_TESTS_TESTING_RANDOM_POLICIES_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "policy_engine/block_domain.h"
#include "policy_engine/decision_point.h"
#include "policy_engine/privacy_unit.h"
#include "policy_engine/release_request.h"
#include "policy_engine/rule.h"

namespace policy_engine::testing {

// "user" and the time-based "user_month" below it.
UnitRegistry UserAndMonthUnits();

// Eight blocks, six time steps, two of them granular.
BlockDomain SmallDomain();

// `n` rules over attributes a0..a4 and contexts std/ml, in both units, with
// budgets drawn from a small set so that dominated rules are common. A
// fifth of the budgets are RDP curves.
std::vector<Rule> RandomRules(int n, std::mt19937_64& rng);

// One event of a trace: a request, optionally preceded by a clock advance.
struct TraceEvent {
  ReleaseRequest request;
  int64_t advance_to = -1;  // < 0: keep the clock
};

std::vector<TraceEvent> RandomTrace(int length, const BlockDomain& domain,
                                    std::mt19937_64& rng);

// Accept/reject flags of a trace.
absl::StatusOr<std::vector<bool>> RunTrace(
    DecisionPoint& dp, const std::vector<TraceEvent>& trace);

// Recomputes from scratch the cumulative cost of the accepted requests per
// (rule, block, time step) and reports the largest relative excess over the
// rule budgets (≤ 0 means every cell is within budget).
absl::StatusOr<double> ReplayExcess(const std::vector<Rule>& rules,
                                    const UnitRegistry& units,
                                    const BlockDomain& domain,
                                    const std::vector<TraceEvent>& trace,
                                    const std::vector<bool>& accepted);

}  // namespace policy_engine::testing

#endif  // POLICY_ENGINE_TESTS_TESTING_RANDOM_POLICIES_H_
