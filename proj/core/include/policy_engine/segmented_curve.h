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

#ifndef POLICY_ENGINE_SEGMENTED_CURVE_H_
#define POLICY_ENGINE_SEGMENTED_CURVE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "policy_engine/alpha_orders.h"
#include "policy_engine/release_request.h"

namespace policy_engine {

// Piecewise-constant map from the blocks [0, domain_size) to RDP curves.
// Each entry holds the curve of the blocks from its start up to the next
// entry's start, so disjoint block ranges compose in parallel while
// repeated charges to the same block compose sequentially.
class SegmentedCurve {
 public:
  struct Segment {
    BlockInterval blocks;
    RdpCurve curve;

    bool operator==(const Segment&) const = default;
  };

  SegmentedCurve() : SegmentedCurve(1, 0) {}
  SegmentedCurve(int64_t domain_size, size_t curve_size);
  // Rebuilds from contiguous segments covering [0, domain_size).
  static SegmentedCurve FromSegments(int64_t domain_size,
                                     std::vector<Segment> segments);

  int64_t domain_size() const { return domain_size_; }
  size_t curve_size() const { return curve_size_; }
  size_t num_segments() const { return segments_.size(); }

  // Adds `cost` to every block in `blocks` (clipped to the domain).
  void Add(const std::vector<BlockInterval>& blocks, const RdpCurve& cost);
  // Visits each segment overlapping `blocks`.
  void ForEach(const std::vector<BlockInterval>& blocks,
               const std::function<void(const RdpCurve&)>& fn) const;
  void ForEachSegment(const std::function<void(const Segment&)>& fn) const;
  // Pointwise maximum with `other` block by block.
  void MaxWith(const SegmentedCurve& other);
  // Merges adjacent segments with identical curves.
  void Coalesce();
  // Curve at one block.
  const RdpCurve& At(int64_t block) const;

  std::vector<Segment> Segments() const;

  bool operator==(const SegmentedCurve& other) const;

 private:
  // Ensures a segment boundary at `at` (0 < at < domain_size).
  void Split(int64_t at);

  int64_t domain_size_;
  size_t curve_size_;
  std::map<int64_t, RdpCurve> segments_;
};

}  // namespace policy_engine

#endif  // POLICY_ENGINE_SEGMENTED_CURVE_H_
