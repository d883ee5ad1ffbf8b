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

#ifndef POLICY_ENGINE_RELEASE_REQUEST_H_
#define POLICY_ENGINE_RELEASE_REQUEST_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "policy_engine/label_set.h"
#include "policy_engine/privacy_budget.h"

namespace policy_engine {

// Half-open range [begin, end) of partitioning-attribute blocks.
struct BlockInterval {
  int64_t begin = 0;
  int64_t end = 0;

  int64_t length() const { return end - begin; }
  bool operator==(const BlockInterval&) const = default;
};

// The blocks of the flattened partitioning-attribute domain a mechanism
// reads: either the whole domain or a sorted set of disjoint intervals.
class BlockSelection {
 public:
  // Whole domain.
  BlockSelection() = default;

  static BlockSelection All() { return BlockSelection(); }
  // Normalizes (sorts, merges overlapping/adjacent); rejects negative or
  // empty intervals.
  static absl::StatusOr<BlockSelection> FromIntervals(
      std::vector<BlockInterval> intervals);
  // `length` consecutive blocks starting at `start`, wrapping around the end
  // of a domain of `domain_size` blocks.
  static BlockSelection WrappingRange(int64_t start, int64_t length,
                                      int64_t domain_size);

  bool is_all() const { return all_; }
  const std::vector<BlockInterval>& intervals() const { return intervals_; }

  // Concrete intervals clipped to [0, domain_size).
  std::vector<BlockInterval> Resolve(int64_t domain_size) const;
  // Number of selected blocks within a domain of `domain_size`.
  int64_t Count(int64_t domain_size) const;
  bool Contains(int64_t block) const;

  bool operator==(const BlockSelection&) const = default;

 private:
  bool all_ = true;
  std::vector<BlockInterval> intervals_;
};

// One labeled DP mechanism inside a release request.
struct Mechanism {
  LabelSet labels;
  // Privacy cost per unit name. Enforcement uses RDP curves; pure-DP and
  // zCDP costs are converted exactly, ADP costs are rejected.
  std::map<std::string, PrivacyBudget> cost_by_unit;
  BlockSelection blocks;
  // Time step for time-based units; unset means the mechanism reads data of
  // every time step.
  std::optional<int64_t> time_step;

  bool operator==(const Mechanism&) const = default;
};

struct ReleaseRequest {
  std::string id;
  std::vector<Mechanism> mechanisms;
  double utility = 0;

  bool operator==(const ReleaseRequest&) const = default;
};

}  // namespace policy_engine

#endif  // POLICY_ENGINE_RELEASE_REQUEST_H_
