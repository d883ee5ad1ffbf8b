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

#include "policy_engine/filter_state.h"

#include <limits>
#include <string>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "policy_engine/errors.h"
#include "policy_engine/serialization.h"
#include "policy_engine/status_macros.h"

namespace policy_engine {
namespace {

bool IsHistoricalAt(int64_t step, int64_t now, const BlockDomain& domain) {
  return domain.time_axis.has_value() &&
         step <= now - domain.time_axis->granular_window;
}

Json SegmentsToJson(const SegmentedCurve& curve) {
  Json out = Json::array();
  curve.ForEachSegment([&out](const SegmentedCurve::Segment& s) {
    out.push_back({{"blocks", {s.blocks.begin, s.blocks.end}},
                   {"curve", ToJson(s.curve)}});
  });
  return out;
}

absl::StatusOr<SegmentedCurve> SegmentsFromJson(const Json& j,
                                                int64_t domain_size,
                                                size_t curve_size) {
  if (!j.is_array()) return ParseError("cell must be a list of segments");
  std::vector<SegmentedCurve::Segment> segments;
  int64_t expected = 0;
  for (const Json& s : j) {
    if (!s.is_object() || !s.contains("blocks") || !s.contains("curve")) {
      return ParseError("segment needs 'blocks' and 'curve'");
    }
    ASSIGN_OR_RETURN(BlockSelection sel,
                     BlockSelectionFromJson(Json::array({s["blocks"]})));
    if (sel.intervals().size() != 1 ||
        sel.intervals().front().begin != expected) {
      return ParseError("segments must be contiguous from block 0");
    }
    ASSIGN_OR_RETURN(RdpCurve curve, RdpCurveFromJson(s["curve"]));
    if (curve.size() != curve_size || !curve.IsNonNegative()) {
      return ParseError("segment curve has the wrong size or is negative");
    }
    expected = sel.intervals().front().end;
    segments.push_back({sel.intervals().front(), std::move(curve)});
  }
  if (expected != domain_size) {
    return ParseError("segments must cover the block domain");
  }
  return SegmentedCurve::FromSegments(domain_size, std::move(segments));
}

}  // namespace

FilterState::FilterState(std::vector<std::string> rule_ids,
                         const std::vector<bool>& time_based,
                         const BlockDomain& domain, size_t curve_size)
    : rule_ids_(std::move(rule_ids)), domain_(domain), curve_size_(curve_size) {
  cells_.reserve(rule_ids_.size());
  for (size_t i = 0; i < rule_ids_.size(); ++i) {
    RuleCells cells;
    cells.time_based = i < time_based.size() && time_based[i];
    cells.base = SegmentedCurve(domain.domain_size, curve_size);
    cells.past = SegmentedCurve(domain.domain_size, curve_size);
    cells_.push_back(std::move(cells));
  }
}

bool FilterState::IsHistorical(int64_t step) const {
  return IsHistoricalAt(step, now_, domain_);
}

absl::StatusOr<RuleCells> FilterState::Apply(
    size_t rule, const std::vector<Charge>& charges) const {
  RuleCells cells = cells_[rule];
  const int64_t horizon = domain_.time_axis.has_value()
                              ? domain_.time_axis->horizon
                              : std::numeric_limits<int64_t>::max();
  for (const Charge& charge : charges) {
    if (!cells.time_based) {
      cells.base.Add(charge.blocks, charge.cost);
      continue;
    }
    if (!charge.time_step.has_value()) {
      cells.base.Add(charge.blocks, charge.cost);
      cells.past.Add(charge.blocks, charge.cost);
      for (auto& [step, curve] : cells.steps)
        curve.Add(charge.blocks, charge.cost);
      continue;
    }
    const int64_t step = *charge.time_step;
    if (step < 0 || step >= horizon) {
      return UnknownTimeStepError(
          absl::StrCat("time step ", step, " outside [0, ", horizon, ")"));
    }
    if (IsHistorical(step)) {
      cells.past.Add(charge.blocks, charge.cost);
    } else {
      auto [it, inserted] = cells.steps.try_emplace(step, cells.base);
      it->second.Add(charge.blocks, charge.cost);
    }
  }
  return cells;
}

void FilterState::ForEachTouched(
    const RuleCells& cells, const std::vector<Charge>& charges, int64_t now,
    const BlockDomain& domain, const std::function<void(const RdpCurve&)>& fn) {
  for (const Charge& charge : charges) {
    if (!cells.time_based) {
      cells.base.ForEach(charge.blocks, fn);
    } else if (!charge.time_step.has_value()) {
      cells.base.ForEach(charge.blocks, fn);
      cells.past.ForEach(charge.blocks, fn);
      for (const auto& [step, curve] : cells.steps) {
        curve.ForEach(charge.blocks, fn);
      }
    } else if (IsHistoricalAt(*charge.time_step, now, domain)) {
      cells.past.ForEach(charge.blocks, fn);
    } else if (auto it = cells.steps.find(*charge.time_step);
               it != cells.steps.end()) {
      it->second.ForEach(charge.blocks, fn);
    }
  }
}

void FilterState::ForEachCurve(
    size_t rule, const std::function<void(const RdpCurve&)>& fn) const {
  const RuleCells& cells = cells_[rule];
  auto visit = [&fn](const SegmentedCurve::Segment& s) { fn(s.curve); };
  cells.base.ForEachSegment(visit);
  if (!cells.time_based) return;
  cells.past.ForEachSegment(visit);
  for (const auto& [step, curve] : cells.steps) curve.ForEachSegment(visit);
}

void FilterState::Replace(size_t rule, RuleCells cells) {
  cells.base.Coalesce();
  cells.past.Coalesce();
  for (auto& [step, curve] : cells.steps) curve.Coalesce();
  cells_[rule] = std::move(cells);
}

void FilterState::CollapseTime(int64_t new_now) {
  if (new_now <= now_) return;
  now_ = new_now;
  for (RuleCells& cells : cells_) {
    if (!cells.time_based) continue;
    for (auto it = cells.steps.begin(); it != cells.steps.end();) {
      if (!IsHistorical(it->first)) break;  // steps are sorted
      cells.past.MaxWith(it->second);
      it = cells.steps.erase(it);
    }
    cells.past.Coalesce();
  }
}

Json FilterState::ToJson() const {
  Json rules = Json::object();
  for (size_t i = 0; i < cells_.size(); ++i) {
    const RuleCells& cells = cells_[i];
    Json entry;
    entry["base"] = SegmentsToJson(cells.base);
    if (cells.time_based) {
      entry["past"] = SegmentsToJson(cells.past);
      Json steps = Json::object();
      for (const auto& [step, curve] : cells.steps) {
        steps[std::to_string(step)] = SegmentsToJson(curve);
      }
      entry["steps"] = std::move(steps);
    }
    rules[rule_ids_[i]] = std::move(entry);
  }
  return {{"now", now_}, {"rules", std::move(rules)}};
}

absl::Status FilterState::LoadJson(const Json& j) {
  if (!j.is_object()) return ParseError("state must be an object");
  FilterState loaded = *this;
  if (j.contains("now")) {
    if (!j["now"].is_number_integer()) return ParseError("now must be an int");
    loaded.now_ = j["now"].get<int64_t>();
  }
  if (!j.contains("rules")) return absl::OkStatus();
  if (!j["rules"].is_object()) return ParseError("rules must be an object");
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < rule_ids_.size(); ++i) index[rule_ids_[i]] = i;
  for (const auto& [id, entry] : j["rules"].items()) {
    auto it = index.find(id);
    if (it == index.end()) {
      return ParseError(absl::StrCat("state references unknown rule ", id));
    }
    if (!entry.is_object()) return ParseError("rule state must be an object");
    RuleCells& cells = loaded.cells_[it->second];
    if (entry.contains("base")) {
      ASSIGN_OR_RETURN(
          cells.base,
          SegmentsFromJson(entry["base"], domain_.domain_size, curve_size_));
    }
    if (!cells.time_based) continue;
    if (entry.contains("past")) {
      ASSIGN_OR_RETURN(
          cells.past,
          SegmentsFromJson(entry["past"], domain_.domain_size, curve_size_));
    }
    cells.steps.clear();
    if (entry.contains("steps")) {
      if (!entry["steps"].is_object())
        return ParseError("steps must be an object");
      for (const auto& [key, segs] : entry["steps"].items()) {
        int64_t step;
        if (!absl::SimpleAtoi(key, &step)) {
          return ParseError(absl::StrCat("bad time step key ", key));
        }
        ASSIGN_OR_RETURN(
            cells.steps[step],
            SegmentsFromJson(segs, domain_.domain_size, curve_size_));
      }
    }
  }
  *this = std::move(loaded);
  return absl::OkStatus();
}

}  // namespace policy_engine
