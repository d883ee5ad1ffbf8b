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

// Serialized scenario results: rounds.csv holds one row per (run, round,
// scope); summary.json holds final costs, utility and violation counts.

#ifndef POLICY_ENGINE_REPORT_H_
#define POLICY_ENGINE_REPORT_H_

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"
#include "policy_engine/scenario.h"

namespace policy_engine {

inline constexpr char kRoundsCsv[] = "rounds.csv";
inline constexpr char kSummaryJson[] = "summary.json";

std::string RoundsCsv(const std::vector<ScenarioRun>& runs);
nlohmann::json SummaryJson(const std::vector<ScenarioRun>& runs);

// Writes both files into `dir`, creating it if needed. IOError on failure.
absl::Status EmitReport(const std::vector<ScenarioRun>& runs,
                        const std::string& dir);

// Human-readable digest of a report directory.
absl::StatusOr<std::string> FormatReport(const std::string& dir);

}  // namespace policy_engine

#endif  // POLICY_ENGINE_REPORT_H_
