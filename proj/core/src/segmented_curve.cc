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

#include "policy_engine/segmented_curve.h"

#include <algorithm>
#include <iterator>

namespace policy_engine {

SegmentedCurve::SegmentedCurve(int64_t domain_size, size_t curve_size)
    : domain_size_(std::max<int64_t>(domain_size, 1)), curve_size_(curve_size) {
  segments_.emplace(0, RdpCurve::Zero(curve_size));
}

SegmentedCurve SegmentedCurve::FromSegments(int64_t domain_size,
                                            std::vector<Segment> segments) {
  size_t curve_size = segments.empty() ? 0 : segments.front().curve.size();
  SegmentedCurve out(domain_size, curve_size);
  out.segments_.clear();
  for (Segment& s : segments) {
    out.segments_[s.blocks.begin] = std::move(s.curve);
  }
  if (!out.segments_.contains(0)) {
    out.segments_.emplace(0, RdpCurve::Zero(curve_size));
  }
  return out;
}

void SegmentedCurve::Split(int64_t at) {
  if (at <= 0 || at >= domain_size_) return;
  auto it = segments_.upper_bound(at);
  --it;
  if (it->first == at) return;
  segments_.emplace_hint(std::next(it), at, it->second);
}

void SegmentedCurve::Add(const std::vector<BlockInterval>& blocks,
                         const RdpCurve& cost) {
  for (const BlockInterval& raw : blocks) {
    const int64_t begin = std::max<int64_t>(raw.begin, 0);
    const int64_t end = std::min(raw.end, domain_size_);
    if (end <= begin) continue;
    Split(begin);
    Split(end);
    for (auto it = segments_.find(begin);
         it != segments_.end() && it->first < end; ++it) {
      it->second += cost;
    }
  }
}

void SegmentedCurve::ForEach(
    const std::vector<BlockInterval>& blocks,
    const std::function<void(const RdpCurve&)>& fn) const {
  for (const BlockInterval& raw : blocks) {
    const int64_t begin = std::max<int64_t>(raw.begin, 0);
    const int64_t end = std::min(raw.end, domain_size_);
    if (end <= begin) continue;
    auto it = segments_.upper_bound(begin);
    --it;
    for (; it != segments_.end() && it->first < end; ++it) fn(it->second);
  }
}

void SegmentedCurve::ForEachSegment(
    const std::function<void(const Segment&)>& fn) const {
  for (auto it = segments_.begin(); it != segments_.end(); ++it) {
    auto next = std::next(it);
    const int64_t end = next == segments_.end() ? domain_size_ : next->first;
    fn(Segment{{it->first, end}, it->second});
  }
}

void SegmentedCurve::MaxWith(const SegmentedCurve& other) {
  for (const auto& [start, unused] : other.segments_) Split(start);
  for (auto& [start, curve] : segments_) {
    curve = RdpCurve::PointwiseMax(curve, other.At(start));
  }
}

void SegmentedCurve::Coalesce() {
  auto it = segments_.begin();
  while (it != segments_.end()) {
    auto next = std::next(it);
    if (next != segments_.end() && next->second == it->second) {
      segments_.erase(next);
    } else {
      it = next;
    }
  }
}

const RdpCurve& SegmentedCurve::At(int64_t block) const {
  auto it = segments_.upper_bound(block);
  --it;
  return it->second;
}

std::vector<SegmentedCurve::Segment> SegmentedCurve::Segments() const {
  std::vector<Segment> out;
  ForEachSegment([&out](const Segment& s) { out.push_back(s); });
  return out;
}

bool SegmentedCurve::operator==(const SegmentedCurve& other) const {
  return domain_size_ == other.domain_size_ &&
         curve_size_ == other.curve_size_ && segments_ == other.segments_;
}

}  // namespace policy_engine
