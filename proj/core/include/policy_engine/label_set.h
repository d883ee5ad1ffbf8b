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

#ifndef POLICY_ENGINE_LABEL_SET_H_
#define POLICY_ENGINE_LABEL_SET_H_

#include <map>
#include <set>
#include <string>

#include "absl/status/status.h"
#include "absl/strings/string_view.h"

namespace policy_engine {

// Reserved label key holding the data attributes a mechanism reads.
inline constexpr absl::string_view kAttributeKey = "attr";
// Conventional key for the deployment context (standard, blackbox-ml, ...).
inline constexpr absl::string_view kContextKey = "context";

// Non-empty and drawn from [a-zA-Z0-9_.-].
bool IsValidIdentifier(absl::string_view s);

// String-keyed multimap of labels attached to a DP mechanism.
class LabelSet {
 public:
  using Entries = std::map<std::string, std::set<std::string>, std::less<>>;

  LabelSet() = default;
  explicit LabelSet(Entries entries) : entries_(std::move(entries)) {}

  // Adds value under key; both must be valid identifiers.
  absl::Status Add(absl::string_view key, absl::string_view value);

  bool Has(absl::string_view key, absl::string_view value) const;
  // Values under `key`, or an empty set.
  const std::set<std::string>& Values(absl::string_view key) const;

  const Entries& entries() const { return entries_; }
  bool operator==(const LabelSet&) const = default;

 private:
  Entries entries_;
};

}  // namespace policy_engine

#endif  // POLICY_ENGINE_LABEL_SET_H_
