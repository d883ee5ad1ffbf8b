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

// Cumulative privacy loss per rule, block and time cell.

#ifndef POLICY_ENGINE_FILTER_STATE_H_
#define POLICY_ENGINE_FILTER_STATE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"
#include "policy_engine/block_domain.h"
#include "policy_engine/segmented_curve.h"

namespace policy_engine {

// Accumulators of one rule.
//
// Rules in non-time units have a single cell, `base`. Rules in time-based
// units track each recent time step in `steps`; steps that fell out of the
// granular window live in `past`, whose curve is the pointwise maximum of
// the steps it absorbed (parallel composition across disjoint steps). For
// such rules `base` holds what every not-yet-materialized step has
// consumed, i.e. the charges of mechanisms that read all time steps.
struct RuleCells {
  bool time_based = false;
  SegmentedCurve base;
  SegmentedCurve past;
  std::map<int64_t, SegmentedCurve> steps;

  bool operator==(const RuleCells&) const = default;
};

// Where one mechanism's cost lands.
struct Charge {
  RdpCurve cost;
  std::vector<BlockInterval> blocks;
  // Unset: every time cell.
  std::optional<int64_t> time_step;
};

class FilterState {
 public:
  FilterState() = default;
  // `time_based[i]` tells whether rule i is tracked per time step.
  FilterState(std::vector<std::string> rule_ids,
              const std::vector<bool>& time_based, const BlockDomain& domain,
              size_t curve_size);

  size_t num_rules() const { return cells_.size(); }
  const std::vector<std::string>& rule_ids() const { return rule_ids_; }
  const RuleCells& cells(size_t rule) const { return cells_[rule]; }
  int64_t now() const { return now_; }
  const BlockDomain& domain() const { return domain_; }

  // Applies `charges` to a copy of rule `rule`'s cells. UnknownTimeStep for
  // steps outside [0, horizon).
  absl::StatusOr<RuleCells> Apply(size_t rule,
                                  const std::vector<Charge>& charges) const;
  // Visits the curves of every (cell, segment) that `charges` touch in
  // `cells`.
  static void ForEachTouched(const RuleCells& cells,
                             const std::vector<Charge>& charges, int64_t now,
                             const BlockDomain& domain,
                             const std::function<void(const RdpCurve&)>& fn);
  // Visits every curve of rule `rule`.
  void ForEachCurve(size_t rule,
                    const std::function<void(const RdpCurve&)>& fn) const;

  void Replace(size_t rule, RuleCells cells);

  // Advances the clock; steps ≤ new_now − granular_window fold into the
  // historical cell. new_now below the current clock is ignored.
  void CollapseTime(int64_t new_now);

  // Whether `step` maps to the historical cell at the current clock.
  bool IsHistorical(int64_t step) const;

  // JSON map rule-id -> cell -> [{blocks: [b, e], curve: [...]}], plus the
  // clock.
  nlohmann::json ToJson() const;
  // Loads accumulators for the rules this state tracks; unknown rule ids
  // are a ParseError.
  absl::Status LoadJson(const nlohmann::json& j);

  bool operator==(const FilterState&) const = default;

 private:
  std::vector<std::string> rule_ids_;
  std::vector<RuleCells> cells_;
  BlockDomain domain_;
  size_t curve_size_ = 0;
  int64_t now_ = 0;
};

}  // namespace policy_engine

#endif  // POLICY_ENGINE_FILTER_STATE_H_
