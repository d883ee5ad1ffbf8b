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

#ifndef POLICY_ENGINE_ALPHA_ORDERS_H_
#define POLICY_ENGINE_ALPHA_ORDERS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace policy_engine {

// The Rényi orders every RDP curve in a deployment is expressed over. Chosen
// once at configuration time and never changed afterwards.
class AlphaOrders {
 public:
  // Orders must be strictly increasing and each > 1.
  static absl::StatusOr<AlphaOrders> Create(std::vector<double> orders);

  // {1.5, 1.75, 2, 2.5, 3, 4, 5, 6, 8, 16, 32, 64, 1e6, 1e10}.
  static const AlphaOrders& Default();

  std::span<const double> values() const { return orders_; }
  size_t size() const { return orders_.size(); }
  double operator[](size_t i) const { return orders_[i]; }

  bool operator==(const AlphaOrders& other) const = default;

 private:
  explicit AlphaOrders(std::vector<double> orders)
      : orders_(std::move(orders)) {}

  std::vector<double> orders_;
};

// Per-order RDP values. Index i holds ε(α_i) for the deployment's
// AlphaOrders; all curves in one computation share the same length.
class RdpCurve {
 public:
  RdpCurve() = default;
  explicit RdpCurve(std::vector<double> values) : values_(std::move(values)) {}

  static RdpCurve Zero(size_t size) {
    return RdpCurve(std::vector<double>(size, 0.0));
  }
  // ε(α) = slope · α, the curve of a Gaussian mechanism with ρ = slope.
  static RdpCurve Linear(double slope, const AlphaOrders& orders);
  // ε(α) = ε for every order, the curve implied by pure ε-DP.
  static RdpCurve Constant(double epsilon, size_t size) {
    return RdpCurve(std::vector<double>(size, epsilon));
  }

  size_t size() const { return values_.size(); }
  double operator[](size_t i) const { return values_[i]; }
  double& operator[](size_t i) { return values_[i]; }
  std::span<const double> values() const { return values_; }

  bool IsNonNegative() const;
  bool IsZero() const;
  // Pointwise ≤.
  bool PointwiseLeq(const RdpCurve& other) const;

  RdpCurve& operator+=(const RdpCurve& other);
  RdpCurve& operator*=(double factor);
  friend RdpCurve operator+(RdpCurve lhs, const RdpCurve& rhs) {
    lhs += rhs;
    return lhs;
  }

  static RdpCurve PointwiseMax(const RdpCurve& a, const RdpCurve& b);

  bool operator==(const RdpCurve& other) const = default;

 private:
  std::vector<double> values_;
};

}  // namespace policy_engine

#endif  // POLICY_ENGINE_ALPHA_ORDERS_H_
