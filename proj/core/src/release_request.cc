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

#include "policy_engine/release_request.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "policy_engine/errors.h"

namespace policy_engine {

absl::StatusOr<BlockSelection> BlockSelection::FromIntervals(
    std::vector<BlockInterval> intervals) {
  for (const BlockInterval& interval : intervals) {
    if (interval.begin < 0 || interval.end <= interval.begin) {
      return ValidationError(absl::StrCat(
          "invalid block interval [", interval.begin, ", ", interval.end, ")"));
    }
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const BlockInterval& a, const BlockInterval& b) {
              return a.begin < b.begin;
            });
  BlockSelection selection;
  selection.all_ = false;
  for (const BlockInterval& interval : intervals) {
    if (!selection.intervals_.empty() &&
        interval.begin <= selection.intervals_.back().end) {
      selection.intervals_.back().end =
          std::max(selection.intervals_.back().end, interval.end);
    } else {
      selection.intervals_.push_back(interval);
    }
  }
  return selection;
}

BlockSelection BlockSelection::WrappingRange(int64_t start, int64_t length,
                                             int64_t domain_size) {
  length = std::clamp<int64_t>(length, 0, domain_size);
  start = ((start % domain_size) + domain_size) % domain_size;
  std::vector<BlockInterval> intervals;
  if (length > 0) {
    const int64_t end = start + length;
    if (end <= domain_size) {
      intervals.push_back({start, end});
    } else {
      intervals.push_back({start, domain_size});
      intervals.push_back({0, end - domain_size});
    }
  }
  // Sorted and merged like FromIntervals; a full-length wrap is one
  // interval.
  return *FromIntervals(std::move(intervals));
}

std::vector<BlockInterval> BlockSelection::Resolve(int64_t domain_size) const {
  if (all_) return {BlockInterval{0, domain_size}};
  std::vector<BlockInterval> out;
  for (const BlockInterval& interval : intervals_) {
    BlockInterval clipped{std::max<int64_t>(interval.begin, 0),
                          std::min(interval.end, domain_size)};
    if (clipped.end > clipped.begin) out.push_back(clipped);
  }
  return out;
}

int64_t BlockSelection::Count(int64_t domain_size) const {
  int64_t count = 0;
  for (const BlockInterval& interval : Resolve(domain_size)) {
    count += interval.length();
  }
  return count;
}

bool BlockSelection::Contains(int64_t block) const {
  if (all_) return true;
  return std::any_of(intervals_.begin(), intervals_.end(),
                     [block](const BlockInterval& interval) {
                       return block >= interval.begin && block < interval.end;
                     });
}

}  // namespace policy_engine
