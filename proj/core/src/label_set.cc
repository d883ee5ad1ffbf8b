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

#include "policy_engine/label_set.h"

#include <algorithm>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "policy_engine/errors.h"

namespace policy_engine {

bool IsValidIdentifier(absl::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return absl::ascii_isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           c == '.' || c == '-';
  });
}

absl::Status LabelSet::Add(absl::string_view key, absl::string_view value) {
  if (!IsValidIdentifier(key) || !IsValidIdentifier(value)) {
    return ValidationError(
        absl::StrCat("invalid label '", key, "': '", value, "'"));
  }
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    it = entries_.emplace(std::string(key), std::set<std::string>{}).first;
  }
  it->second.emplace(value);
  return absl::OkStatus();
}

bool LabelSet::Has(absl::string_view key, absl::string_view value) const {
  auto it = entries_.find(key);
  return it != entries_.end() && it->second.contains(std::string(value));
}

const std::set<std::string>& LabelSet::Values(absl::string_view key) const {
  static const std::set<std::string>* const kEmpty = new std::set<std::string>;
  auto it = entries_.find(key);
  return it == entries_.end() ? *kEmpty : it->second;
}

}  // namespace policy_engine
