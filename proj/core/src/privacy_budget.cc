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

#include "policy_engine/privacy_budget.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/string_view.h"
#include "policy_engine/errors.h"

namespace policy_engine {
namespace {

bool NonNegativeFinite(double v) { return std::isfinite(v) && v >= 0.0; }

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

absl::string_view BudgetVariantName(BudgetVariant variant) {
  switch (variant) {
    case BudgetVariant::kPure:
      return "pure";
    case BudgetVariant::kApprox:
      return "adp";
    case BudgetVariant::kRenyi:
      return "rdp";
    case BudgetVariant::kZcdp:
      return "zcdp";
  }
  return "unknown";
}

absl::Status PrivacyBudget::Validate(const AlphaOrders* orders) const {
  return std::visit(
      Overloaded{
          [](const PureDp& b) -> absl::Status {
            if (!NonNegativeFinite(b.epsilon)) {
              return ValidationError("epsilon must be finite and >= 0");
            }
            return absl::OkStatus();
          },
          [](const ApproxDp& b) -> absl::Status {
            if (!NonNegativeFinite(b.epsilon)) {
              return ValidationError("epsilon must be finite and >= 0");
            }
            if (!(b.delta >= 0.0 && b.delta < 1.0)) {
              return ValidationError("delta must lie in [0, 1)");
            }
            return absl::OkStatus();
          },
          [orders](const RenyiDp& b) -> absl::Status {
            for (double v : b.curve.values()) {
              if (!NonNegativeFinite(v)) {
                return ValidationError("RDP entries must be finite and >= 0");
              }
            }
            if (orders != nullptr && b.curve.size() != orders->size()) {
              return ValidationError(
                  absl::StrCat("RDP curve has ", b.curve.size(),
                               " entries, expected ", orders->size()));
            }
            return absl::OkStatus();
          },
          [](const ZeroConcentratedDp& b) -> absl::Status {
            if (!NonNegativeFinite(b.rho)) {
              return ValidationError("rho must be finite and >= 0");
            }
            return absl::OkStatus();
          },
      },
      value_);
}

std::string PrivacyBudget::DebugString() const {
  return std::visit(
      Overloaded{
          [](const PureDp& b) {
            return absl::StrFormat("pure(%g)", b.epsilon);
          },
          [](const ApproxDp& b) {
            return absl::StrFormat("adp(%g, %g)", b.epsilon, b.delta);
          },
          [](const RenyiDp& b) {
            return absl::StrCat("rdp[", absl::StrJoin(b.curve.values(), ", "),
                                "]");
          },
          [](const ZeroConcentratedDp& b) {
            return absl::StrFormat("zcdp(%g)", b.rho);
          },
      },
      value_);
}

absl::StatusOr<bool> BudgetLeq(const PrivacyBudget& lhs,
                               const PrivacyBudget& rhs) {
  if (lhs.variant() != rhs.variant()) {
    return VariantMismatchError(
        absl::StrCat("cannot compare ", BudgetVariantName(lhs.variant()),
                     " with ", BudgetVariantName(rhs.variant())));
  }
  switch (lhs.variant()) {
    case BudgetVariant::kPure:
      return lhs.get_if<PureDp>()->epsilon <= rhs.get_if<PureDp>()->epsilon;
    case BudgetVariant::kApprox: {
      const ApproxDp& a = *lhs.get_if<ApproxDp>();
      const ApproxDp& b = *rhs.get_if<ApproxDp>();
      return a.epsilon <= b.epsilon && a.delta <= b.delta;
    }
    case BudgetVariant::kRenyi: {
      const RdpCurve& a = lhs.get_if<RenyiDp>()->curve;
      const RdpCurve& b = rhs.get_if<RenyiDp>()->curve;
      if (a.size() != b.size()) {
        return VariantMismatchError("RDP curves over different alpha orders");
      }
      return a.PointwiseLeq(b);
    }
    case BudgetVariant::kZcdp:
      return lhs.get_if<ZeroConcentratedDp>()->rho <=
             rhs.get_if<ZeroConcentratedDp>()->rho;
  }
  return absl::InternalError("unreachable budget variant");
}

PrivacyBudget ScaleBudget(const PrivacyBudget& budget, double factor) {
  return std::visit(Overloaded{
                        [factor](const PureDp& b) -> PrivacyBudget {
                          return PureDp{b.epsilon * factor};
                        },
                        [factor](const ApproxDp& b) -> PrivacyBudget {
                          return ApproxDp{b.epsilon * factor, b.delta};
                        },
                        [factor](const RenyiDp& b) -> PrivacyBudget {
                          RdpCurve curve = b.curve;
                          curve *= factor;
                          return RenyiDp{std::move(curve)};
                        },
                        [factor](const ZeroConcentratedDp& b) -> PrivacyBudget {
                          return ZeroConcentratedDp{b.rho * factor};
                        },
                    },
                    budget.value());
}

}  // namespace policy_engine
