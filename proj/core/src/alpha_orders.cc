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

#include "policy_engine/alpha_orders.h"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "policy_engine/errors.h"

namespace policy_engine {

absl::StatusOr<AlphaOrders> AlphaOrders::Create(std::vector<double> orders) {
  if (orders.empty()) return ConfigError("alpha orders must not be empty");
  for (size_t i = 0; i < orders.size(); ++i) {
    if (!std::isfinite(orders[i]) || orders[i] <= 1.0) {
      return ConfigError("alpha orders must be finite and > 1");
    }
    if (i > 0 && orders[i] <= orders[i - 1]) {
      return ConfigError("alpha orders must be strictly increasing");
    }
  }
  return AlphaOrders(std::move(orders));
}

const AlphaOrders& AlphaOrders::Default() {
  static const AlphaOrders* const kDefault = new AlphaOrders(
      {1.5, 1.75, 2, 2.5, 3, 4, 5, 6, 8, 16, 32, 64, 1e6, 1e10});
  return *kDefault;
}

RdpCurve RdpCurve::Linear(double slope, const AlphaOrders& orders) {
  std::vector<double> values(orders.size());
  for (size_t i = 0; i < orders.size(); ++i) values[i] = slope * orders[i];
  return RdpCurve(std::move(values));
}

bool RdpCurve::IsNonNegative() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return v >= 0.0; });
}

bool RdpCurve::IsZero() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return v == 0.0; });
}

bool RdpCurve::PointwiseLeq(const RdpCurve& other) const {
  assert(size() == other.size());
  for (size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] > other.values_[i]) return false;
  }
  return true;
}

RdpCurve& RdpCurve::operator+=(const RdpCurve& other) {
  assert(size() == other.size());
  for (size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

RdpCurve& RdpCurve::operator*=(double factor) {
  for (double& v : values_) v *= factor;
  return *this;
}

RdpCurve RdpCurve::PointwiseMax(const RdpCurve& a, const RdpCurve& b) {
  assert(a.size() == b.size());
  std::vector<double> out(a.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = std::max(a[i], b[i]);
  return RdpCurve(std::move(out));
}

}  // namespace policy_engine
