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

#include "policy_engine/accounting.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/string_view.h"
#include "policy_engine/errors.h"
#include "policy_engine/status_macros.h"

namespace policy_engine {
namespace {

constexpr int kTightGridPoints = 10000;
constexpr double kTightGridMin = 1e-6;  // α − 1 at the dense grid's low end
constexpr double kTightGridMax = 1e6;

absl::Status CheckDelta(double delta) {
  if (!(delta > 0 && delta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  return absl::OkStatus();
}

bool PositiveFinite(double x) { return std::isfinite(x) && x > 0; }

// ρα + ln(1/δ)/(α − 1) + ln(1 − 1/α), parameterized by t = α − 1 so the
// grid can approach α = 1 without cancellation.
double TightZcdpObjective(double rho, double log_inv_delta, double t) {
  const double alpha = 1.0 + t;
  return rho * alpha + log_inv_delta / t + std::log(t / alpha);
}

}  // namespace

RdpCurve ComposeRdp(std::span<const RdpCurve> costs, size_t size) {
  RdpCurve total = RdpCurve::Zero(size);
  for (const RdpCurve& cost : costs) total += cost;
  return total;
}

absl::StatusOr<ApproxDp> ComposeAdpBasic(std::span<const ApproxDp> costs) {
  ApproxDp total;
  for (const ApproxDp& cost : costs) {
    total.epsilon += cost.epsilon;
    total.delta += cost.delta;
  }
  if (total.delta >= 1) {
    return DeltaOverflowError(
        absl::StrCat("composed delta ", total.delta, " is not below 1"));
  }
  return total;
}

absl::StatusOr<ApproxDp> RdpToAdp(const RdpCurve& curve, double delta,
                                  const AlphaOrders& orders) {
  RETURN_IF_ERROR(CheckDelta(delta));
  if (curve.size() != orders.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("RDP curve has ", curve.size(), " entries for ",
                     orders.size(), " orders"));
  }
  const double log_inv_delta = -std::log(delta);
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < orders.size(); ++i) {
    best = std::min(best, curve[i] + log_inv_delta / (orders[i] - 1.0));
  }
  return ApproxDp{best, delta};
}

absl::StatusOr<ApproxDp> ZcdpToAdp(double rho, double delta,
                                   ZcdpConversion mode) {
  RETURN_IF_ERROR(CheckDelta(delta));
  if (!(rho >= 0) || !std::isfinite(rho)) {
    return absl::InvalidArgumentError(absl::StrCat("invalid rho ", rho));
  }
  const double log_inv_delta = -std::log(delta);
  const double closed = rho + 2.0 * std::sqrt(rho * log_inv_delta);
  if (mode == ZcdpConversion::kClosedForm) return ApproxDp{closed, delta};

  // Dense log grid over t = α − 1, then golden-section refinement inside the
  // bracket around the best grid point.
  const double log_lo = std::log(kTightGridMin);
  const double step =
      (std::log(kTightGridMax) - log_lo) / (kTightGridPoints - 1);
  int best_i = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kTightGridPoints; ++i) {
    const double value =
        TightZcdpObjective(rho, log_inv_delta, std::exp(log_lo + i * step));
    if (value < best) {
      best = value;
      best_i = i;
    }
  }
  double a = log_lo + std::max(best_i - 1, 0) * step;
  double b = log_lo + std::min(best_i + 1, kTightGridPoints - 1) * step;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [&](double log_t) {
    return TightZcdpObjective(rho, log_inv_delta, std::exp(log_t));
  };
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int iter = 0; iter < 100 && b - a > 1e-12; ++iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  best = std::min({best, fc, fd});
  return ApproxDp{std::max(0.0, std::min(best, closed)), delta};
}

absl::StatusOr<PrivacyBudget> GroupPrivacy(const PrivacyBudget& budget, int k) {
  if (k < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("group size must be positive, got ", k));
  }
  if (k == 1) return budget;
  if (const auto* pure = budget.get_if<PureDp>()) {
    return PrivacyBudget(PureDp{k * pure->epsilon});
  }
  if (const auto* zcdp = budget.get_if<ZeroConcentratedDp>()) {
    return PrivacyBudget(
        ZeroConcentratedDp{static_cast<double>(k) * k * zcdp->rho});
  }
  return UnsupportedVariantError(
      absl::StrCat("group privacy with k=", k, " for variant ",
                   BudgetVariantName(budget.variant())));
}

absl::StatusOr<PrivacyBudget> ConvertUnit(const PrivacyBudget& budget,
                                          absl::string_view src,
                                          absl::string_view dst,
                                          const UnitRegistry& units) {
  const PrivacyUnit* src_unit = units.Find(src);
  if (src_unit == nullptr || !units.Contains(dst)) {
    return NoConversionPathError(
        absl::StrCat("unknown unit in conversion ", src, " -> ", dst));
  }
  if (src == dst) return budget;
  if (auto it = src_unit->group_factor_to.find(std::string(dst));
      it != src_unit->group_factor_to.end()) {
    return GroupPrivacy(budget, it->second);
  }
  if (units.Leq(dst, src)) return budget;
  return NoConversionPathError(
      absl::StrCat("no conversion from ", src, " to ", dst));
}

absl::StatusOr<double> GaussianSigma(double l2_sensitivity, double epsilon,
                                     double delta) {
  if (!PositiveFinite(l2_sensitivity) || !PositiveFinite(epsilon)) {
    return absl::InvalidArgumentError(
        "sensitivity and epsilon must be positive");
  }
  RETURN_IF_ERROR(CheckDelta(delta));
  return l2_sensitivity * std::sqrt(2.0 * std::log(1.25 / delta)) / epsilon;
}

absl::StatusOr<double> EpsilonForAuxiliaryUnit(double sigma,
                                               double aux_l2_sensitivity,
                                               double delta) {
  if (!PositiveFinite(sigma) || !PositiveFinite(aux_l2_sensitivity)) {
    return absl::InvalidArgumentError("sigma and sensitivity must be positive");
  }
  RETURN_IF_ERROR(CheckDelta(delta));
  return aux_l2_sensitivity * std::sqrt(2.0 * std::log(1.25 / delta)) / sigma;
}

absl::StatusOr<double> GaussianRho(double sigma, double l2_sensitivity) {
  if (!PositiveFinite(sigma) || !(l2_sensitivity >= 0) ||
      !std::isfinite(l2_sensitivity)) {
    return absl::InvalidArgumentError("invalid sigma or sensitivity");
  }
  return l2_sensitivity * l2_sensitivity / (2.0 * sigma * sigma);
}

absl::StatusOr<SensitivityProfile> SensitivityProfile::FromContributionBounds(
    const std::map<std::string, int>& bounds, double per_record) {
  if (!(per_record >= 0) || !std::isfinite(per_record)) {
    return absl::InvalidArgumentError("per-record sensitivity must be >= 0");
  }
  SensitivityProfile profile;
  for (const auto& [unit, k] : bounds) {
    if (k < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("negative contribution bound for ", unit));
    }
    profile.l2_[unit] = k * per_record;
    profile.l2_by_unit_[unit] = k * per_record;
  }
  return profile;
}

absl::StatusOr<double> SensitivityProfile::L2(absl::string_view unit) const {
  auto it = l2_by_unit_.find(unit);
  if (it == l2_by_unit_.end()) {
    return NoConversionPathError(
        absl::StrCat("no sensitivity for unit ", unit));
  }
  return it->second;
}

absl::StatusOr<std::map<std::string, double>>
SensitivityProfile::EpsilonsForRelease(absl::string_view primary,
                                       double epsilon, double delta) const {
  ASSIGN_OR_RETURN(const double primary_l2, L2(primary));
  ASSIGN_OR_RETURN(const double sigma,
                   GaussianSigma(primary_l2, epsilon, delta));
  std::map<std::string, double> out;
  for (const auto& [unit, l2] : l2_) {
    if (l2 == 0) {
      out[unit] = 0;
      continue;
    }
    ASSIGN_OR_RETURN(out[unit], EpsilonForAuxiliaryUnit(sigma, l2, delta));
  }
  return out;
}

absl::StatusOr<bool> WithinBudget(const RdpCurve& consumed,
                                  const PrivacyBudget& budget,
                                  const AlphaOrders& orders) {
  if (const auto* rdp = budget.get_if<RenyiDp>()) {
    if (rdp->curve.size() != consumed.size()) {
      return absl::InvalidArgumentError("RDP budget and cost sizes differ");
    }
    for (size_t i = 0; i < consumed.size(); ++i) {
      if (consumed[i] <= rdp->curve[i]) return true;
    }
    return false;
  }
  if (const auto* adp = budget.get_if<ApproxDp>()) {
    // Without a δ slack, RDP certifies only the zero curve.
    if (adp->delta <= 0) return consumed.IsZero();
    ASSIGN_OR_RETURN(const ApproxDp converted,
                     RdpToAdp(consumed, adp->delta, orders));
    return converted.epsilon <= adp->epsilon;
  }
  return VariantMismatchError(
      absl::StrCat("filter budgets must be adp or rdp, got ",
                   BudgetVariantName(budget.variant())));
}

absl::StatusOr<bool> FilterCheck(const RdpCurve& cumulative,
                                 const RdpCurve& new_cost,
                                 const PrivacyBudget& budget,
                                 const AlphaOrders& orders) {
  if (cumulative.size() != new_cost.size()) {
    return absl::InvalidArgumentError("RDP curve sizes differ");
  }
  return WithinBudget(cumulative + new_cost, budget, orders);
}

absl::StatusOr<RdpCurve> ToRdpCost(const PrivacyBudget& cost,
                                   const AlphaOrders& orders) {
  RETURN_IF_ERROR(cost.Validate(&orders));
  if (const auto* rdp = cost.get_if<RenyiDp>()) return rdp->curve;
  if (const auto* pure = cost.get_if<PureDp>()) {
    return RdpCurve::Constant(pure->epsilon, orders.size());
  }
  if (const auto* zcdp = cost.get_if<ZeroConcentratedDp>()) {
    return RdpCurve::Linear(zcdp->rho, orders);
  }
  return UnsupportedVariantError("adp costs have no RDP representation");
}

absl::StatusOr<double> CalibrateGaussianRho(double epsilon, double delta,
                                            const AlphaOrders& orders) {
  RETURN_IF_ERROR(CheckDelta(delta));
  auto eps_at = [&](double rho) -> absl::StatusOr<double> {
    ASSIGN_OR_RETURN(const ApproxDp adp,
                     RdpToAdp(RdpCurve::Linear(rho, orders), delta, orders));
    return adp.epsilon;
  };
  ASSIGN_OR_RETURN(const double floor_eps, eps_at(0));
  if (!(epsilon > floor_eps) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "epsilon %g is not attainable at delta %g", epsilon, delta));
  }
  double lo = 0;
  double hi = 1;
  for (;;) {
    ASSIGN_OR_RETURN(const double e, eps_at(hi));
    if (e >= epsilon) break;
    lo = hi;
    hi *= 2;
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    ASSIGN_OR_RETURN(const double e, eps_at(mid));
    (e < epsilon ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace policy_engine
