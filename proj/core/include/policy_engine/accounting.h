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

// DP arithmetic: composition, variant conversion, group privacy, unit
// conversion, multi-unit Gaussian calibration and privacy-filter checks. All
// functions are pure.

#ifndef POLICY_ENGINE_ACCOUNTING_H_
#define POLICY_ENGINE_ACCOUNTING_H_

#include <map>
#include <span>
#include <string>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "policy_engine/alpha_orders.h"
#include "policy_engine/privacy_budget.h"
#include "policy_engine/privacy_unit.h"

namespace policy_engine {

// Sequential RDP composition: pointwise sum. The empty composition is the
// zero curve of `size` entries.
RdpCurve ComposeRdp(std::span<const RdpCurve> costs,
                    size_t size = AlphaOrders::Default().size());

// Basic ADP composition (Σε, Σδ). DeltaOverflow when Σδ ≥ 1.
absl::StatusOr<ApproxDp> ComposeAdpBasic(std::span<const ApproxDp> costs);

// ε = min over the orders of curve[α] + ln(1/δ)/(α − 1). Requires
// δ ∈ (0, 1) and a curve over `orders`.
absl::StatusOr<ApproxDp> RdpToAdp(
    const RdpCurve& curve, double delta,
    const AlphaOrders& orders = AlphaOrders::Default());

enum class ZcdpConversion {
  // ε = ρ + 2·sqrt(ρ·ln(1/δ)).
  kClosedForm,
  // ε = min over α > 1 of ρα + ln(1/δ)/(α − 1) + ln(1 − 1/α), evaluated on
  // a dense logarithmic grid with local refinement. Never larger than the
  // closed form.
  kTightNumeric,
};

absl::StatusOr<ApproxDp> ZcdpToAdp(double rho, double delta,
                                   ZcdpConversion mode);

// PureDP(ε) -> PureDP(k·ε); ZCDP(ρ) -> ZCDP(k²·ρ). k = 1 returns any budget
// unchanged; k > 1 on ADP/RDP is UnsupportedVariant.
absl::StatusOr<PrivacyBudget> GroupPrivacy(const PrivacyBudget& budget, int k);

// Expresses a budget stated for unit `src` in unit `dst`:
//   - src == dst: unchanged;
//   - src declares group_factor_to[dst] = k: GroupPrivacy(budget, k);
//   - dst ≤ src in the unit order: unchanged (group size one);
//   - otherwise NoConversionPath.
absl::StatusOr<PrivacyBudget> ConvertUnit(const PrivacyBudget& budget,
                                          absl::string_view src,
                                          absl::string_view dst,
                                          const UnitRegistry& units);

// Gaussian mechanism calibration σ = Δ₂·sqrt(2·ln(1.25/δ))/ε.
absl::StatusOr<double> GaussianSigma(double l2_sensitivity, double epsilon,
                                     double delta);

// ε̂ = Δ̂₂·sqrt(2·ln(1.25/δ))/σ: the ε a Gaussian release calibrated with σ
// provides for an auxiliary unit of sensitivity Δ̂₂.
absl::StatusOr<double> EpsilonForAuxiliaryUnit(double sigma,
                                               double aux_l2_sensitivity,
                                               double delta);

// ρ = Δ₂²/(2σ²), the zCDP parameter of a Gaussian release.
absl::StatusOr<double> GaussianRho(double sigma, double l2_sensitivity);

// Per-unit L2 sensitivities of one transformation chain after contribution
// bounding.
class SensitivityProfile {
 public:
  // Every privacy ID of unit u keeps at most bounds[u] records, each
  // changing the query output by at most `per_record` in L2 norm; worst case
  // all records land in the same output coordinate, so Δ₂(u) = k·per_record.
  static absl::StatusOr<SensitivityProfile> FromContributionBounds(
      const std::map<std::string, int>& bounds, double per_record = 1.0);

  const std::map<std::string, double>& l2() const { return l2_; }
  absl::StatusOr<double> L2(absl::string_view unit) const;

  // Calibrates σ for (ε, δ) on `primary` and reports the ε every unit
  // obtains from the same release.
  absl::StatusOr<std::map<std::string, double>> EpsilonsForRelease(
      absl::string_view primary, double epsilon, double delta) const;

 private:
  std::map<std::string, double, std::less<>> l2_by_unit_;
  std::map<std::string, double> l2_;
};

// Whether cumulative + new_cost stays within `budget`. RDP budgets accept
// if some order is within budget; ADP budgets convert the composed curve at
// the budget's δ. Other variants are a VariantMismatch.
absl::StatusOr<bool> FilterCheck(
    const RdpCurve& cumulative, const RdpCurve& new_cost,
    const PrivacyBudget& budget,
    const AlphaOrders& orders = AlphaOrders::Default());

// FilterCheck for an already-composed curve.
absl::StatusOr<bool> WithinBudget(
    const RdpCurve& consumed, const PrivacyBudget& budget,
    const AlphaOrders& orders = AlphaOrders::Default());

// Exact RDP representation of a mechanism cost: RDP as is, pure ε as the
// constant curve, zCDP ρ as ρ·α. ADP costs have no RDP representation
// (UnsupportedVariant).
absl::StatusOr<RdpCurve> ToRdpCost(
    const PrivacyBudget& cost,
    const AlphaOrders& orders = AlphaOrders::Default());

// The ρ whose Gaussian curve ρ·α converts (RdpToAdp) to exactly ε at δ.
absl::StatusOr<double> CalibrateGaussianRho(
    double epsilon, double delta,
    const AlphaOrders& orders = AlphaOrders::Default());

}  // namespace policy_engine

#endif  // POLICY_ENGINE_ACCOUNTING_H_
