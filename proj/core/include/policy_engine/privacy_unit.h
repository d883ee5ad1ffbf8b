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

#ifndef POLICY_ENGINE_PRIVACY_UNIT_H_
#define POLICY_ENGINE_PRIVACY_UNIT_H_

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace policy_engine {

// The entity whose change defines neighboring datasets.
struct PrivacyUnit {
  std::string name;
  // A guarantee for this unit implies one for unit `u` under group privacy
  // with group size group_factor_to[u] (u is covered by that many instances
  // of this unit), e.g. user-day -> user-month with 31.
  std::map<std::string, int> group_factor_to;
  // Units that cover this one (this ≤ u). Closed transitively by
  // UnitRegistry.
  std::set<std::string> ord_above;
  // The privacy ID carries a time step (user-month, user-day, ...). Rules in
  // such units are tracked per time cell.
  bool time_based = false;

  bool operator==(const PrivacyUnit&) const = default;
};

// The validated set of units with the reflexive-transitive closure of the
// declared order.
class UnitRegistry {
 public:
  // Rejects duplicate names, unknown references, cycles between distinct
  // units and non-positive group factors.
  static absl::StatusOr<UnitRegistry> Create(std::vector<PrivacyUnit> units);

  // A registry holding a single non-time unit called "user".
  static UnitRegistry SingleUser();

  const PrivacyUnit* Find(absl::string_view name) const;
  bool Contains(absl::string_view name) const { return Find(name) != nullptr; }

  // lhs ≤ rhs in the closed order. Unknown names compare false.
  bool Leq(absl::string_view lhs, absl::string_view rhs) const;

  const std::vector<PrivacyUnit>& units() const { return units_; }

 private:
  UnitRegistry() = default;

  std::vector<PrivacyUnit> units_;
  std::map<std::string, size_t, std::less<>> index_;
  std::vector<std::vector<bool>> leq_;
};

}  // namespace policy_engine

#endif  // POLICY_ENGINE_PRIVACY_UNIT_H_
