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

#include <random>

#include "gtest/gtest.h"
#include "nlohmann/json.hpp"
#include "policy_engine/budget_fn.h"
#include "policy_engine/compiler.h"
#include "policy_engine/policy_set.h"
#include "policy_engine/predicate.h"
#include "policy_engine/privacy_budget.h"
#include "policy_engine/scenario.h"
#include "policy_engine/workload.h"

namespace policy_engine {
namespace {

using nlohmann::json;

LabelSet Labels(std::vector<std::pair<std::string, std::string>> entries) {
  LabelSet labels;
  for (const auto& [k, v] : entries) labels.Add(k, v).IgnoreError();
  return labels;
}

TEST(PredicateTest, ParseAndEvaluate) {
  absl::StatusOr<Predicate> p =
      Predicate::Parse("attr in {age, zip} && !(context == ml)");
  ASSERT_TRUE(p.ok()) << p.status();
  EXPECT_TRUE(p->Evaluate(Labels({{"attr", "zip"}, {"context", "std"}})));
  EXPECT_FALSE(p->Evaluate(Labels({{"attr", "zip"}, {"context", "ml"}})));
  EXPECT_FALSE(p->Evaluate(Labels({{"attr", "name"}})));
}

TEST(PredicateTest, ToStringRoundTrips) {
  for (const char* text :
       {"true", "context == ml", "attr in {a, b}",
        "(attr in {a} || context == x) && !(data == time)"}) {
    absl::StatusOr<Predicate> p = Predicate::Parse(text);
    ASSERT_TRUE(p.ok()) << text;
    absl::StatusOr<Predicate> again = Predicate::Parse(p->ToString());
    ASSERT_TRUE(again.ok()) << p->ToString();
    EXPECT_EQ(*p, *again) << text;
  }
}

TEST(PredicateTest, ParseErrors) {
  for (const char* text : {"", "attr in {", "a ==", "&& b == c", "x == y )"}) {
    EXPECT_FALSE(Predicate::Parse(text).ok()) << text;
  }
}

TEST(PredicateTest, SyntacticImplication) {
  Predicate narrow = Predicate::AttrIntersects({"a"});
  Predicate wide = Predicate::AttrIntersects({"a", "b"});
  EXPECT_EQ(SyntacticallyImplies(narrow, wide), true);
  EXPECT_EQ(SyntacticallyImplies(narrow, Predicate::True()), true);
  Predicate conj =
      Predicate::And({narrow, Predicate::HasLabel("context", "ml")});
  EXPECT_EQ(SyntacticallyImplies(conj, narrow), true);
}

// Implication, when claimed, must hold on every label set.
TEST(PredicateTest, ImplicationIsSoundOnSamples) {
  std::mt19937_64 rng(3);
  const std::vector<std::string> attrs = {"a", "b", "c"};
  auto random_set = [&] {
    std::set<std::string> s;
    for (const auto& a : attrs) {
      if (rng() % 2) s.insert(a);
    }
    if (s.empty()) s.insert("a");
    return s;
  };
  auto random_pred = [&] {
    switch (rng() % 4) {
      case 0:
        return Predicate::True();
      case 1:
        return Predicate::HasLabel("context", rng() % 2 ? "x" : "y");
      case 2:
        return Predicate::AttrIntersects(random_set());
      default:
        return Predicate::And({Predicate::AttrIntersects(random_set()),
                               Predicate::HasLabel("context", "x")});
    }
  };
  for (int i = 0; i < 500; ++i) {
    Predicate p = random_pred(), q = random_pred();
    if (SyntacticallyImplies(p, q) != true) continue;
    for (int m = 0; m < 16; ++m) {
      LabelSet labels;
      for (size_t k = 0; k < attrs.size(); ++k) {
        if (m & (1 << k)) labels.Add("attr", attrs[k]).IgnoreError();
      }
      labels.Add("context", m & 8 ? "x" : "y").IgnoreError();
      if (p.Evaluate(labels)) {
        EXPECT_TRUE(q.Evaluate(labels))
            << p.ToString() << " => " << q.ToString();
      }
    }
  }
}

TEST(BudgetTest, LeqWithinVariant) {
  EXPECT_EQ(BudgetLeq(ApproxDp{1, 1e-7}, ApproxDp{2, 1e-7}).value(), true);
  EXPECT_EQ(BudgetLeq(ApproxDp{1, 1e-6}, ApproxDp{2, 1e-7}).value(), false);
  EXPECT_EQ(BudgetLeq(PureDp{3}, PureDp{2}).value(), false);
  EXPECT_FALSE(BudgetLeq(PureDp{1}, ZeroConcentratedDp{1}).ok());
}

TEST(BudgetTest, ScaleBudget) {
  EXPECT_EQ(ScaleBudget(ApproxDp{2, 1e-7}, 1.5),
            PrivacyBudget(ApproxDp{3, 1e-7}));
  EXPECT_EQ(ScaleBudget(ZeroConcentratedDp{0.5}, 2),
            PrivacyBudget(ZeroConcentratedDp{1}));
}

TEST(BudgetFnTest, MapTableInterpolatesAndInverts) {
  absl::StatusOr<BudgetFn> fn = BudgetFn::MapTable(
      {{1.7, 3}, {1.8, 5}, {1.9, 7}, {2.0, 10}, {2.3, 15}, {2.5, 20}});
  ASSERT_TRUE(fn.ok());
  EXPECT_DOUBLE_EQ(fn->ApplyScalar(1.85).value(), 6);
  EXPECT_DOUBLE_EQ(fn->ApplyScalar(2.0).value(), 10);
  for (double y : {3.0, 4.0, 7.0, 12.5, 20.0}) {
    absl::StatusOr<double> x = fn->InvertScalar(y);
    ASSERT_TRUE(x.ok());
    EXPECT_NEAR(fn->ApplyScalar(*x).value(), y, 1e-9);
  }
  absl::StatusOr<BudgetFn> again = BudgetFn::FromJson(fn->ToJson());
  ASSERT_TRUE(again.ok());
  EXPECT_EQ(*again, *fn);
}

TEST(BudgetFnTest, RejectsBadTables) {
  EXPECT_FALSE(BudgetFn::MapTable({}).ok());
  EXPECT_FALSE(BudgetFn::MapTable({{1, 2}, {1, 3}}).ok());
  EXPECT_FALSE(BudgetFn::Scale(-1).ok());
}

TEST(PolicySetTest, ParsesCustomAndExtension) {
  absl::StatusOr<PolicySet> set = ParsePolicySetText(R"({
    "base_policies": [
      {"type": "custom", "name": "g", "unit": "user", "predicate": "true",
       "budget": {"type": "adp", "epsilon": 3, "delta": 1e-7}}],
    "extension_policies": [
      {"name": "ctx", "extensions": [
        {"name": "ml", "predicate": "context == ml", "rank": 0},
        {"name": "any", "predicate": "true", "rank": 1,
         "budget_fn": {"type": "scale", "factor": 2}}]}]
  })");
  ASSERT_TRUE(set.ok()) << set.status();
  absl::StatusOr<CompiledPolicies> compiled = Compile(*set);
  ASSERT_TRUE(compiled.ok()) << compiled.status();
  EXPECT_EQ(compiled->intermediate_rules.size(), 1u);
  ASSERT_EQ(compiled->rules.size(), 2u);
}

TEST(PolicySetTest, RejectsMalformedDocuments) {
  for (const char* text : {
           "[]",
           R"({"base_policies": [{"type": "nope"}]})",
           R"({"base_policies": [{"type": "custom", "name": "g",
               "unit": "martian", "predicate": "true",
               "budget": {"type": "pure", "epsilon": 1}}]})",
           R"({"base_policies": [{"type": "custom", "name": "g",
               "unit": "user", "predicate": "true",
               "budget": {"type": "pure", "epsilon": -1}}]})",
       }) {
    EXPECT_FALSE(ParsePolicySetText(text).ok()) << text;
  }
}

json ContextExtension() {
  const WorkloadConfig cfg = WorkloadConfig::Desk(ScenarioKind::kContext);
  json doc = ScenarioPolicyDocument(cfg, Schema{}, 10).value();
  return doc["extension_policies"][0];
}

TEST(CompilerTest, ScopeDocumentRuleCounts) {
  const WorkloadConfig cfg = WorkloadConfig::Desk(ScenarioKind::kScope);
  const Schema schema = SampleSchema(cfg);
  absl::StatusOr<json> doc = ScenarioPolicyDocument(cfg, schema, 10);
  ASSERT_TRUE(doc.ok());
  absl::StatusOr<PolicySet> set = ParsePolicySet(*doc);
  ASSERT_TRUE(set.ok()) << set.status();
  absl::StatusOr<CompiledPolicies> compiled = Compile(*set);
  ASSERT_TRUE(compiled.ok());
  EXPECT_EQ(compiled->intermediate_rules.size(), 181u);
  EXPECT_EQ(compiled->rules.size(), 181u);

  (*doc)["extension_policies"] = json::array({ContextExtension()});
  set = ParsePolicySet(*doc);
  ASSERT_TRUE(set.ok()) << set.status();
  compiled = Compile(*set);
  ASSERT_TRUE(compiled.ok());
  EXPECT_EQ(compiled->intermediate_rules.size(), 181u);
  EXPECT_EQ(compiled->rules.size(), 362u);
}

TEST(CompilerTest, RuleCountIsProductOfExtensionSizes) {
  json doc = json::parse(R"({
    "base_policies": [
      {"type": "custom", "name": "a", "unit": "user", "predicate": "true",
       "budget": {"type": "pure", "epsilon": 4}},
      {"type": "custom", "name": "b", "unit": "user",
       "predicate": "attr in {x}",
       "budget": {"type": "pure", "epsilon": 2}}]})");
  json e2 = {
      {"name", "two"},
      {"extensions",
       json::array({json{{"name", "p"}, {"predicate", "k == p"}, {"rank", 0}},
                    json{{"name", "q"}, {"predicate", "true"}, {"rank", 1}}})}};
  json e3 = {
      {"name", "three"},
      {"extensions",
       json::array(
           {json{{"name", "u"}, {"predicate", "m == u"}, {"rank", {1, 0}}},
            json{{"name", "v"}, {"predicate", "m == v"}, {"rank", {0, 1}}},
            json{{"name", "w"}, {"predicate", "true"}, {"rank", {1, 1}}}})}};
  doc["extension_policies"] = json::array({e2, e3});
  absl::StatusOr<PolicySet> set = ParsePolicySet(doc);
  ASSERT_TRUE(set.ok()) << set.status();
  absl::StatusOr<CompiledPolicies> compiled = Compile(*set);
  ASSERT_TRUE(compiled.ok()) << compiled.status();
  EXPECT_EQ(compiled->rules.size(), 2u * 2u * 3u);
  for (const Rule& r : compiled->rules) {
    EXPECT_TRUE(r.order_key.has_value());
    EXPECT_EQ(r.provenance.extension_choices.size(), 2u);
  }
}

}  // namespace
}  // namespace policy_engine
