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

#include "policy_engine/privacy_unit.h"

#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "policy_engine/errors.h"
#include "policy_engine/label_set.h"

namespace policy_engine {

absl::StatusOr<UnitRegistry> UnitRegistry::Create(
    std::vector<PrivacyUnit> units) {
  UnitRegistry registry;
  for (size_t i = 0; i < units.size(); ++i) {
    if (!IsValidIdentifier(units[i].name)) {
      return ValidationError(
          absl::StrCat("invalid unit name '", units[i].name, "'"));
    }
    if (!registry.index_.emplace(units[i].name, i).second) {
      return ValidationError(
          absl::StrCat("duplicate unit '", units[i].name, "'"));
    }
  }
  const size_t n = units.size();
  registry.leq_.assign(n, std::vector<bool>(n, false));
  for (size_t i = 0; i < n; ++i) {
    registry.leq_[i][i] = true;
    for (const std::string& above : units[i].ord_above) {
      auto it = registry.index_.find(above);
      if (it == registry.index_.end()) {
        return ValidationError(absl::StrCat("unit '", units[i].name,
                                            "' is ordered below unknown unit '",
                                            above, "'"));
      }
      registry.leq_[i][it->second] = true;
    }
    for (const auto& [target, k] : units[i].group_factor_to) {
      if (!registry.index_.contains(target)) {
        return ValidationError(absl::StrCat("unit '", units[i].name,
                                            "' declares a conversion to unknown"
                                            " unit '",
                                            target, "'"));
      }
      if (k < 1) {
        return ValidationError(absl::StrCat("group factor from '",
                                            units[i].name, "' to '", target,
                                            "' must be >= 1"));
      }
    }
  }
  // Floyd-Warshall style transitive closure; unit sets are small.
  for (size_t k = 0; k < n; ++k) {
    for (size_t i = 0; i < n; ++i) {
      if (!registry.leq_[i][k]) continue;
      for (size_t j = 0; j < n; ++j) {
        if (registry.leq_[k][j]) registry.leq_[i][j] = true;
      }
    }
  }
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (registry.leq_[i][j] && registry.leq_[j][i]) {
        return ValidationError(absl::StrCat("cyclic unit order between '",
                                            units[i].name, "' and '",
                                            units[j].name, "'"));
      }
    }
  }
  registry.units_ = std::move(units);
  return registry;
}

UnitRegistry UnitRegistry::SingleUser() {
  return *Create({PrivacyUnit{.name = "user"}});
}

const PrivacyUnit* UnitRegistry::Find(absl::string_view name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &units_[it->second];
}

bool UnitRegistry::Leq(absl::string_view lhs, absl::string_view rhs) const {
  auto a = index_.find(lhs);
  auto b = index_.find(rhs);
  if (a == index_.end() || b == index_.end()) return false;
  return leq_[a->second][b->second];
}

}  // namespace policy_engine
