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

#ifndef POLICY_ENGINE_BUDGET_FN_H_
#define POLICY_ENGINE_BUDGET_FN_H_

#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"
#include "policy_engine/privacy_budget.h"

namespace policy_engine {

// Maps a base budget to a derived one. Functions act on ε (pure, ADP; δ
// unchanged) or ρ (zCDP). Scale also multiplies RDP curves; MapTable on an
// RDP budget is an UnsupportedVariant error.
class BudgetFn {
 public:
  enum class Kind { kIdentity, kScale, kMapTable };
  using Knot = std::pair<double, double>;

  BudgetFn() = default;

  static BudgetFn Identity() { return BudgetFn(); }
  static absl::StatusOr<BudgetFn> Scale(double factor);
  // Knots strictly increasing in both coordinates. Between knots the output
  // is linearly interpolated; outside, it is clamped to the nearest knot or,
  // with `clamp` false, rejected with BudgetFnDomain.
  static absl::StatusOr<BudgetFn> MapTable(std::vector<Knot> knots,
                                           bool clamp = true);

  Kind kind() const { return kind_; }
  double factor() const { return factor_; }
  const std::vector<Knot>& knots() const { return knots_; }
  bool clamp() const { return clamp_; }

  absl::StatusOr<double> ApplyScalar(double x) const;
  absl::StatusOr<PrivacyBudget> Apply(const PrivacyBudget& budget) const;

  // Inverse of a MapTable over its knot range, used to recover a base value
  // from a mapped target. Identity and Scale invert exactly.
  absl::StatusOr<double> InvertScalar(double y) const;

  nlohmann::json ToJson() const;
  static absl::StatusOr<BudgetFn> FromJson(const nlohmann::json& j);

  bool operator==(const BudgetFn&) const = default;

 private:
  Kind kind_ = Kind::kIdentity;
  double factor_ = 1;
  std::vector<Knot> knots_;
  bool clamp_ = true;
};

}  // namespace policy_engine

#endif  // POLICY_ENGINE_BUDGET_FN_H_
