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

#ifndef POLICY_ENGINE_BLOCK_DOMAIN_H_
#define POLICY_ENGINE_BLOCK_DOMAIN_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"

namespace policy_engine {

// Time steps tracked for time-based units: [0, horizon). Steps older than
// now − granular_window are folded into a single historical cell.
struct TimeAxis {
  int64_t granular_window = 0;
  int64_t horizon = 1;

  bool operator==(const TimeAxis&) const = default;
};

// Shared partitioning of privacy units into blocks. All rules use the same
// partitioning attributes; their flattened domain has `domain_size` blocks.
struct BlockDomain {
  std::vector<std::string> partitioning_attributes;
  int64_t domain_size = 1;
  std::optional<TimeAxis> time_axis;

  absl::Status Validate() const {
    if (domain_size < 1) {
      return absl::InvalidArgumentError("block domain size must be >= 1");
    }
    if (time_axis.has_value() &&
        (time_axis->granular_window < 0 || time_axis->horizon < 1)) {
      return absl::InvalidArgumentError(
          "time axis needs granular_window >= 0 and horizon >= 1");
    }
    return absl::OkStatus();
  }

  bool operator==(const BlockDomain&) const = default;
};

}  // namespace policy_engine

#endif  // POLICY_ENGINE_BLOCK_DOMAIN_H_
