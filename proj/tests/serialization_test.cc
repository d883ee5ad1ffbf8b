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

#include "policy_engine/serialization.h"

#include <random>

#include "gtest/gtest.h"
#include "policy_engine/alpha_orders.h"
#include "testing/random_policies.h"

namespace policy_engine {
namespace {

TEST(SerializationTest, BudgetsRoundTrip) {
  const AlphaOrders& orders = AlphaOrders::Default();
  for (const PrivacyBudget& b :
       {PrivacyBudget(PureDp{0.5}), PrivacyBudget(ApproxDp{3, 1e-7}),
        PrivacyBudget(ZeroConcentratedDp{0.015}),
        PrivacyBudget(RenyiDp{RdpCurve::Linear(0.1, orders)})}) {
    absl::StatusOr<PrivacyBudget> back =
        BudgetFromJson(Json::parse(ToJson(b).dump()), &orders);
    ASSERT_TRUE(back.ok()) << back.status();
    EXPECT_EQ(*back, b);
  }
}

TEST(SerializationTest, RejectsInvalidBudgets) {
  for (const char* text :
       {R"({"type": "pure"})", R"({"type": "adp", "epsilon": 1})",
        R"({"type": "adp", "epsilon": 1, "delta": 1.5})",
        R"({"type": "zcdp", "rho": -1})", R"({"type": "laplace"})",
        R"({"type": "rdp", "curve": [1, 2]})", R"([])"}) {
    EXPECT_FALSE(
        BudgetFromJson(Json::parse(text), &AlphaOrders::Default()).ok())
        << text;
  }
}

TEST(SerializationTest, RequestsRoundTrip) {
  std::mt19937_64 rng(41);
  for (const testing::TraceEvent& e :
       testing::RandomTrace(50, testing::SmallDomain(), rng)) {
    absl::StatusOr<ReleaseRequest> back =
        ReleaseRequestFromJson(Json::parse(ToJson(e.request).dump()));
    ASSERT_TRUE(back.ok()) << back.status();
    EXPECT_EQ(ToJson(*back).dump(), ToJson(e.request).dump());
    EXPECT_EQ(*back, e.request);
  }
}

TEST(SerializationTest, RulesRoundTrip) {
  std::mt19937_64 rng(42);
  const std::vector<Rule> rules = testing::RandomRules(20, rng);
  absl::StatusOr<std::vector<Rule>> back =
      RulesFromJson(Json::parse(RulesToJson(rules).dump()));
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(*back, rules);
}

TEST(SerializationTest, BlockSelections) {
  absl::StatusOr<BlockSelection> all = BlockSelectionFromJson("all");
  ASSERT_TRUE(all.ok());
  EXPECT_TRUE(all->is_all());
  EXPECT_FALSE(BlockSelectionFromJson(Json::parse("[[3, 1]]")).ok());
  // Overlapping intervals merge.
  absl::StatusOr<BlockSelection> merged =
      BlockSelectionFromJson(Json::parse("[[2, 6], [0, 4]]"));
  ASSERT_TRUE(merged.ok());
  EXPECT_EQ(merged->intervals(), (std::vector<BlockInterval>{{0, 6}}));
}

TEST(SerializationTest, MissingFileIsIoError) {
  absl::StatusOr<Json> j = ReadJsonFile("/nonexistent/file.json");
  EXPECT_EQ(j.status().code(), absl::StatusCode::kUnavailable);
}

}  // namespace
}  // namespace policy_engine
