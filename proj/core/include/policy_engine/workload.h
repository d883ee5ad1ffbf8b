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

// Synthetic release-request workloads for the evaluation scenarios.
//
// Each round draws a Poisson number of requests. A request picks one of the
// mechanism types uniformly, one of the type's cost levels, a wrapping range
// of partitioning-attribute blocks, a set of schema attributes and the
// scenario's context/time labels.

#ifndef POLICY_ENGINE_WORKLOAD_H_
#define POLICY_ENGINE_WORKLOAD_H_

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"
#include "policy_engine/alpha_orders.h"
#include "policy_engine/policy_set.h"
#include "policy_engine/release_request.h"

namespace policy_engine {

enum class ScenarioKind { kContext, kScope, kTime };

// "S1", "S2", "S3".
const char* ScenarioName(ScenarioKind kind);
absl::StatusOr<ScenarioKind> ParseScenarioName(const std::string& name);

struct MechanismType {
  enum class Family { kGaussian, kPure };

  std::string name;
  Family family = Family::kGaussian;
  // Cost levels as ε at the request δ.
  std::vector<double> epsilons;
  // Beta(a, b) parameters of the selected fraction of the block domain.
  double pa_a = 1;
  double pa_b = 1;
  // Requests of this type may carry the blackbox-ML context label.
  bool ml = false;
};

// The six request types of the mixed workload.
std::vector<MechanismType> DefaultMechanismMix();

struct WorkloadConfig {
  ScenarioKind scenario = ScenarioKind::kContext;
  uint64_t seed = 1;
  int rounds = 10;
  double requests_per_round = 50;
  int unlock_rounds = 6;
  int64_t pa_domain_size = 2048;
  int pa_range_unit = 100;
  double delta_request = 1e-9;
  double delta_budget = 1e-7;
  // Utility A · L^beta · K^alpha with A ~ Beta(a_a, a_b).
  double utility_alpha = 1;
  double utility_beta = 2;
  double utility_a_a = 0.25;
  double utility_a_b = 0.25;
  std::vector<MechanismType> mechanisms = DefaultMechanismMix();
  // Total budgets swept by `simulate`.
  std::vector<double> epsilon_totals = {3, 5, 7, 10, 15, 20};

  // Schema sampling.
  int num_attributes = 150;
  double attribute_continuation = 0.75;
  double attribute_zipf = 1.0;
  int num_categories = 10;
  double category_continuation = 0.6;
  double category_zipf = 0.1;

  // Context scenario: fraction of ML requests labeled blackbox and the map
  // from the standard budget to the blackbox (total) budget.
  double blackbox_rate = 0.8;
  std::vector<std::pair<double, double>> context_knots = {
      {1.7, 3}, {1.8, 5}, {1.9, 7}, {2.0, 10}, {2.3, 15}, {2.5, 20}};

  // Scope scenario budgets.
  std::map<std::string, double> attribute_risk_budgets = {
      {"low", 20}, {"medium", 9}, {"high", 3}};
  std::map<std::string, double> category_risk_budgets = {
      {"low", 12}, {"medium", 10}, {"high", 5}};
  double strong_factor = 1.5;
  double weak_factor = 2.0;

  // Time scenario.
  double time_fraction = 0.5;
  double current_month_prob = 1.0 / 3;
  int month_radius = 3;
  int rounds_per_month = 4;
  double month_budget = 3;

  absl::Status Validate() const;
  nlohmann::json ToJson() const;
  static absl::StatusOr<WorkloadConfig> FromJson(const nlohmann::json& j);

  // Desk-scale defaults for a scenario.
  static WorkloadConfig Desk(ScenarioKind scenario);
  // Full-size run: 20 rounds of 504 requests over 204,800 blocks.
  static WorkloadConfig Full(ScenarioKind scenario);
};

// Attribute/category schema shared by every request of a run.
struct Schema {
  std::vector<std::string> attributes;
  // Risk level per attribute: "high" every tenth popularity rank, "medium"
  // the one after, "low" otherwise.
  std::vector<std::string> attribute_risk;
  std::vector<std::string> categories;
  std::vector<std::string> category_risk;
  // attribute -> category -> level.
  std::map<std::string, std::map<std::string, MembershipLevel>> membership;
};

// `count` distinct indices in [0, weights.size()) drawn sequentially from
// the weights, renormalizing after each pick.
std::vector<int> SampleDistinct(const std::vector<double>& weights, int count,
                                std::mt19937_64& rng);

// 1 + the number of trials up to and including the first stop, stop
// probability 1 − continuation; mean 1 + 1/(1 − continuation).
int SampleSetSize(double continuation, std::mt19937_64& rng);

// Zipf weights 1/i^s for i = 1..n.
std::vector<double> ZipfWeights(int n, double s);

// Schema attribute indices of one request.
std::vector<int> SampleAttributes(const WorkloadConfig& cfg,
                                  std::mt19937_64& rng);
// Category indices of one attribute; the first is its member category.
std::vector<int> SampleCategories(const WorkloadConfig& cfg,
                                  std::mt19937_64& rng);

Schema SampleSchema(const WorkloadConfig& cfg);

// Time step of a time-based request: the current month with
// cfg.current_month_prob, otherwise uniform over the other months within
// cfg.month_radius.
int64_t SampleMonth(const WorkloadConfig& cfg, int64_t now,
                    std::mt19937_64& rng);
// Current month of a round (1-based); months before the first are needed
// for the window, so the clock starts at month_radius.
int64_t MonthOfRound(const WorkloadConfig& cfg, int round);
// Number of months any request of the run can reference.
int64_t MonthHorizon(const WorkloadConfig& cfg);

struct WorkloadRequest {
  ReleaseRequest request;
  int type = 0;
  double epsilon = 0;
  int64_t blocks_selected = 0;
};

class WorkloadGenerator {
 public:
  static absl::StatusOr<WorkloadGenerator> Create(
      const WorkloadConfig& cfg,
      const AlphaOrders& orders = AlphaOrders::Default());

  const Schema& schema() const { return schema_; }
  // Requests of round `round` (1-based). Rounds must be drawn in order.
  std::vector<WorkloadRequest> NextRound(int round);

 private:
  WorkloadGenerator(WorkloadConfig cfg, Schema schema,
                    std::map<double, double> rho_by_epsilon);

  WorkloadRequest Draw(int round, int index);

  WorkloadConfig cfg_;
  Schema schema_;
  std::map<double, double> rho_by_epsilon_;
  std::vector<double> attribute_weights_;
  std::mt19937_64 rng_;
};

// Every round of a run.
absl::StatusOr<std::vector<std::vector<WorkloadRequest>>> GenerateWorkload(
    const WorkloadConfig& cfg);

}  // namespace policy_engine

#endif  // POLICY_ENGINE_WORKLOAD_H_
