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

#include "policy_engine/budget_fn.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "policy_engine/errors.h"
#include "policy_engine/status_macros.h"

namespace policy_engine {
namespace {

// Piecewise-linear lookup through (x, y) knots sorted by x.
double Interpolate(const std::vector<BudgetFn::Knot>& knots, double x,
                   bool swap) {
  auto in = [swap](const BudgetFn::Knot& k) {
    return swap ? k.second : k.first;
  };
  auto out = [swap](const BudgetFn::Knot& k) {
    return swap ? k.first : k.second;
  };
  if (x <= in(knots.front())) return out(knots.front());
  if (x >= in(knots.back())) return out(knots.back());
  auto hi = std::lower_bound(
      knots.begin(), knots.end(), x,
      [&](const BudgetFn::Knot& k, double v) { return in(k) < v; });
  if (in(*hi) == x) return out(*hi);
  auto lo = hi - 1;
  const double t = (x - in(*lo)) / (in(*hi) - in(*lo));
  return out(*lo) + t * (out(*hi) - out(*lo));
}

}  // namespace

absl::StatusOr<BudgetFn> BudgetFn::Scale(double factor) {
  if (!(factor > 0) || !std::isfinite(factor)) {
    return ValidationError(
        absl::StrCat("scale factor must be > 0, got ", factor));
  }
  BudgetFn fn;
  fn.kind_ = Kind::kScale;
  fn.factor_ = factor;
  return fn;
}

absl::StatusOr<BudgetFn> BudgetFn::MapTable(std::vector<Knot> knots,
                                            bool clamp) {
  if (knots.empty()) return ValidationError("map table needs knots");
  for (size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i].first) || !std::isfinite(knots[i].second) ||
        knots[i].first < 0 || knots[i].second < 0) {
      return ValidationError("map table knots must be finite and >= 0");
    }
    if (i > 0 && (knots[i].first <= knots[i - 1].first ||
                  knots[i].second <= knots[i - 1].second)) {
      return ValidationError("map table knots must be strictly increasing");
    }
  }
  BudgetFn fn;
  fn.kind_ = Kind::kMapTable;
  fn.knots_ = std::move(knots);
  fn.clamp_ = clamp;
  return fn;
}

absl::StatusOr<double> BudgetFn::ApplyScalar(double x) const {
  switch (kind_) {
    case Kind::kIdentity:
      return x;
    case Kind::kScale:
      return x * factor_;
    case Kind::kMapTable:
      if (!clamp_ && (x < knots_.front().first || x > knots_.back().first)) {
        return BudgetFnDomainError(absl::StrCat(x, " outside [",
                                                knots_.front().first, ", ",
                                                knots_.back().first, "]"));
      }
      return Interpolate(knots_, x, /*swap=*/false);
  }
  return x;
}

absl::StatusOr<double> BudgetFn::InvertScalar(double y) const {
  switch (kind_) {
    case Kind::kIdentity:
      return y;
    case Kind::kScale:
      return y / factor_;
    case Kind::kMapTable:
      if (!clamp_ && (y < knots_.front().second || y > knots_.back().second)) {
        return BudgetFnDomainError(absl::StrCat(y, " outside [",
                                                knots_.front().second, ", ",
                                                knots_.back().second, "]"));
      }
      return Interpolate(knots_, y, /*swap=*/true);
  }
  return y;
}

absl::StatusOr<PrivacyBudget> BudgetFn::Apply(
    const PrivacyBudget& budget) const {
  if (kind_ == Kind::kIdentity) return budget;
  if (const auto* b = budget.get_if<PureDp>()) {
    ASSIGN_OR_RETURN(const double e, ApplyScalar(b->epsilon));
    return PrivacyBudget(PureDp{e});
  }
  if (const auto* b = budget.get_if<ApproxDp>()) {
    ASSIGN_OR_RETURN(const double e, ApplyScalar(b->epsilon));
    return PrivacyBudget(ApproxDp{e, b->delta});
  }
  if (const auto* b = budget.get_if<ZeroConcentratedDp>()) {
    ASSIGN_OR_RETURN(const double rho, ApplyScalar(b->rho));
    return PrivacyBudget(ZeroConcentratedDp{rho});
  }
  if (kind_ == Kind::kScale) return ScaleBudget(budget, factor_);
  return UnsupportedVariantError("map table cannot be applied to RDP budgets");
}

nlohmann::json BudgetFn::ToJson() const {
  nlohmann::json j;
  switch (kind_) {
    case Kind::kIdentity:
      j["type"] = "identity";
      break;
    case Kind::kScale:
      j["type"] = "scale";
      j["factor"] = factor_;
      break;
    case Kind::kMapTable: {
      j["type"] = "map_table";
      nlohmann::json knots = nlohmann::json::array();
      for (const auto& [x, y] : knots_) knots.push_back({x, y});
      j["knots"] = std::move(knots);
      j["clamp"] = clamp_;
      break;
    }
  }
  return j;
}

absl::StatusOr<BudgetFn> BudgetFn::FromJson(const nlohmann::json& j) {
  if (j.is_null()) return Identity();
  if (!j.is_object()) return ParseError("budget_fn must be an object");
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "identity") return Identity();
    if (type == "scale") return Scale(j.at("factor").get<double>());
    if (type == "map_table") {
      std::vector<Knot> knots;
      for (const auto& k : j.at("knots")) {
        if (!k.is_array() || k.size() != 2) {
          return ParseError("map_table knots must be [in, out] pairs");
        }
        knots.emplace_back(k[0].get<double>(), k[1].get<double>());
      }
      return MapTable(std::move(knots), j.value("clamp", true));
    }
    return ParseError(absl::StrCat("unknown budget_fn type '", type, "'"));
  } catch (const nlohmann::json::exception& e) {
    return ParseError(absl::StrCat("budget_fn: ", e.what()));
  }
}

}  // namespace policy_engine
