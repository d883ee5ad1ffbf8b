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

#ifndef POLICY_ENGINE_PRIVACY_BUDGET_H_
#define POLICY_ENGINE_PRIVACY_BUDGET_H_

#include <string>
#include <variant>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "policy_engine/alpha_orders.h"

namespace policy_engine {

struct PureDp {
  double epsilon = 0;
  bool operator==(const PureDp&) const = default;
};

struct ApproxDp {
  double epsilon = 0;
  double delta = 0;
  bool operator==(const ApproxDp&) const = default;
};

struct RenyiDp {
  RdpCurve curve;
  bool operator==(const RenyiDp&) const = default;
};

struct ZeroConcentratedDp {
  double rho = 0;
  bool operator==(const ZeroConcentratedDp&) const = default;
};

enum class BudgetVariant { kPure, kApprox, kRenyi, kZcdp };

absl::string_view BudgetVariantName(BudgetVariant variant);

// A privacy-loss bound in one of four DP variants. Values are immutable once
// constructed; Validate() checks the per-variant invariants.
class PrivacyBudget {
 public:
  using Value = std::variant<PureDp, ApproxDp, RenyiDp, ZeroConcentratedDp>;

  PrivacyBudget() : value_(PureDp{}) {}
  PrivacyBudget(PureDp v) : value_(v) {}              // NOLINT
  PrivacyBudget(ApproxDp v) : value_(v) {}            // NOLINT
  PrivacyBudget(RenyiDp v) : value_(std::move(v)) {}  // NOLINT
  PrivacyBudget(ZeroConcentratedDp v) : value_(v) {}  // NOLINT

  BudgetVariant variant() const {
    return static_cast<BudgetVariant>(value_.index());
  }
  const Value& value() const { return value_; }

  template <typename T>
  const T* get_if() const {
    return std::get_if<T>(&value_);
  }

  // ε ≥ 0, δ ∈ [0, 1), ρ ≥ 0, every RDP entry ≥ 0, all finite. When `orders`
  // is given, RDP curves must also have one entry per order.
  absl::Status Validate(const AlphaOrders* orders = nullptr) const;

  std::string DebugString() const;

  bool operator==(const PrivacyBudget& other) const = default;

 private:
  Value value_;
};

// Partial order on budgets of the same variant. ADP requires both ε and δ to
// be ≤; RDP is pointwise. Comparing different variants is a VariantMismatch.
absl::StatusOr<bool> BudgetLeq(const PrivacyBudget& lhs,
                               const PrivacyBudget& rhs);

// Multiplies the variant's primary parameter (ε, ρ, or every RDP entry) by
// `factor`; δ is unchanged.
PrivacyBudget ScaleBudget(const PrivacyBudget& budget, double factor);

}  // namespace policy_engine

#endif  // POLICY_ENGINE_PRIVACY_BUDGET_H_
