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

#include "policy_engine/accounting.h"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "policy_engine/privacy_unit.h"

namespace policy_engine {
namespace {

// Reference values below come from scipy: the tight zCDP bound minimizes
// over real α and the calibration runs over the default order grid.

TEST(GroupPrivacyTest, ZcdpScalesWithSquare) {
  absl::StatusOr<PrivacyBudget> month =
      GroupPrivacy(ZeroConcentratedDp{0.015}, 31);
  ASSERT_TRUE(month.ok());
  ASSERT_NE(month->get_if<ZeroConcentratedDp>(), nullptr);
  EXPECT_DOUBLE_EQ(month->get_if<ZeroConcentratedDp>()->rho, 14.415);
}

TEST(GroupPrivacyTest, PureAndApproxScaleLinearly) {
  absl::StatusOr<PrivacyBudget> pure = GroupPrivacy(PureDp{0.5}, 4);
  ASSERT_TRUE(pure.ok());
  EXPECT_DOUBLE_EQ(pure->get_if<PureDp>()->epsilon, 2.0);
  EXPECT_FALSE(GroupPrivacy(PureDp{0.5}, 0).ok());
}

TEST(ZcdpToAdpTest, ClosedForm) {
  absl::StatusOr<ApproxDp> adp =
      ZcdpToAdp(14.415, 1e-6, ZcdpConversion::kClosedForm);
  ASSERT_TRUE(adp.ok());
  EXPECT_NEAR(adp->epsilon, 42.639145, 1e-5);
  EXPECT_DOUBLE_EQ(adp->delta, 1e-6);
}

struct TightCase {
  double rho;
  double tight;
  double closed;
};

class ZcdpTightTest : public ::testing::TestWithParam<TightCase> {};

TEST_P(ZcdpTightTest, MatchesReferenceAndIsBelowClosedForm) {
  const TightCase& c = GetParam();
  absl::StatusOr<ApproxDp> tight =
      ZcdpToAdp(c.rho, 1e-6, ZcdpConversion::kTightNumeric);
  absl::StatusOr<ApproxDp> closed =
      ZcdpToAdp(c.rho, 1e-6, ZcdpConversion::kClosedForm);
  ASSERT_TRUE(tight.ok());
  ASSERT_TRUE(closed.ok());
  EXPECT_NEAR(tight->epsilon, c.tight, 1e-4 * c.tight);
  EXPECT_NEAR(closed->epsilon, c.closed, 1e-5 * c.closed);
  EXPECT_LE(tight->epsilon, closed->epsilon);
}

INSTANTIATE_TEST_SUITE_P(Reference, ZcdpTightTest,
                         ::testing::Values(TightCase{14.415, 41.930758,
                                                     42.639145},
                                           TightCase{0.735, 6.897825, 7.108194},
                                           TightCase{0.015, 0.892458, 0.925456},
                                           TightCase{1.0, 8.192491, 8.433844},
                                           TightCase{0.1, 2.367787, 2.450788}));

TEST(ZcdpToAdpTest, RejectsBadInput) {
  EXPECT_FALSE(ZcdpToAdp(-1, 1e-6, ZcdpConversion::kClosedForm).ok());
  EXPECT_FALSE(ZcdpToAdp(1, 0, ZcdpConversion::kTightNumeric).ok());
  EXPECT_FALSE(ZcdpToAdp(1, 1, ZcdpConversion::kTightNumeric).ok());
}

TEST(RdpToAdpTest, LinearCurve) {
  const AlphaOrders& orders = AlphaOrders::Default();
  absl::StatusOr<ApproxDp> a = RdpToAdp(RdpCurve::Linear(0.015, orders), 1e-6);
  absl::StatusOr<ApproxDp> b = RdpToAdp(RdpCurve::Linear(0.03, orders), 1e-6);
  ASSERT_TRUE(a.ok());
  ASSERT_TRUE(b.ok());
  EXPECT_NEAR(a->epsilon, 0.9256616309, 1e-9);
  EXPECT_NEAR(b->epsilon, 1.4010340372, 1e-9);
}

TEST(RdpToAdpTest, ConstantCurveApproachesPureEpsilon) {
  absl::StatusOr<ApproxDp> a =
      RdpToAdp(RdpCurve::Constant(1.0, AlphaOrders::Default().size()), 1e-6);
  ASSERT_TRUE(a.ok());
  EXPECT_NEAR(a->epsilon, 1.000000001381551, 1e-12);
}

TEST(ComposeTest, RdpAddsPointwise) {
  const AlphaOrders& orders = AlphaOrders::Default();
  std::vector<RdpCurve> costs = {RdpCurve::Linear(0.1, orders),
                                 RdpCurve::Constant(0.5, orders.size())};
  RdpCurve sum = ComposeRdp(costs);
  for (size_t i = 0; i < orders.size(); ++i) {
    EXPECT_DOUBLE_EQ(sum[i], 0.1 * orders[i] + 0.5);
  }
}

TEST(ComposeTest, AdpBasicAddsBoth) {
  std::vector<ApproxDp> costs = {{1, 1e-7}, {2, 2e-7}};
  absl::StatusOr<ApproxDp> sum = ComposeAdpBasic(costs);
  ASSERT_TRUE(sum.ok());
  EXPECT_DOUBLE_EQ(sum->epsilon, 3);
  EXPECT_DOUBLE_EQ(sum->delta, 3e-7);
  std::vector<ApproxDp> overflow = {{1, 0.6}, {1, 0.6}};
  EXPECT_EQ(ComposeAdpBasic(overflow).status().code(),
            absl::StatusCode::kOutOfRange);
}

TEST(GaussianTest, SigmaReference) {
  absl::StatusOr<double> sigma = GaussianSigma(1, 1, 1e-5);
  ASSERT_TRUE(sigma.ok());
  EXPECT_NEAR(*sigma, 4.844805262605389, 1e-12);
}

TEST(GaussianTest, AuxiliaryUnitRoundTrip) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> sens(0.1, 50);
  std::uniform_real_distribution<double> eps(0.01, 10);
  std::uniform_real_distribution<double> log_delta(-12, -2);
  for (int i = 0; i < 1000; ++i) {
    const double d = sens(rng), d_hat = sens(rng), e = eps(rng);
    const double delta = std::pow(10.0, log_delta(rng));
    absl::StatusOr<double> sigma = GaussianSigma(d, e, delta);
    ASSERT_TRUE(sigma.ok());
    absl::StatusOr<double> aux = EpsilonForAuxiliaryUnit(*sigma, d_hat, delta);
    ASSERT_TRUE(aux.ok());
    EXPECT_NEAR(*aux, e * d_hat / d, 1e-9 * e * d_hat / d);
  }
}

TEST(GaussianTest, CalibrationOnDefaultOrders) {
  struct Case {
    double epsilon;
    double rho;
  };
  for (const Case& c :
       {Case{0.05, 4.9979276713e-08}, Case{0.2, 1.9997927671e-07},
        Case{0.75, 6.5790511317e-03}}) {
    absl::StatusOr<double> rho = CalibrateGaussianRho(c.epsilon, 1e-9);
    ASSERT_TRUE(rho.ok());
    EXPECT_NEAR(*rho, c.rho, 1e-6 * c.rho) << c.epsilon;
    // Calibrated cost converts back to at most the target.
    absl::StatusOr<ApproxDp> back =
        RdpToAdp(RdpCurve::Linear(*rho, AlphaOrders::Default()), 1e-9);
    ASSERT_TRUE(back.ok());
    EXPECT_LE(back->epsilon, c.epsilon * (1 + 1e-9));
  }
}

TEST(SensitivityProfileTest, EpsilonsScaleWithSensitivity) {
  absl::StatusOr<SensitivityProfile> profile =
      SensitivityProfile::FromContributionBounds(
          {{"user", 31}, {"user_day", 1}});
  ASSERT_TRUE(profile.ok());
  absl::StatusOr<std::map<std::string, double>> eps =
      profile->EpsilonsForRelease("user_day", 1.0, 1e-6);
  ASSERT_TRUE(eps.ok());
  EXPECT_NEAR(eps->at("user_day"), 1.0, 1e-12);
  EXPECT_NEAR(eps->at("user"), 31.0, 1e-9);
}

TEST(FilterCheckTest, AdpBudgetUsesConversion) {
  const AlphaOrders& orders = AlphaOrders::Default();
  const RdpCurve spent = RdpCurve::Linear(0.015, orders);
  const RdpCurve next = RdpCurve::Linear(0.015, orders);
  absl::StatusOr<bool> tight = FilterCheck(spent, next, ApproxDp{1.40, 1e-6});
  absl::StatusOr<bool> loose = FilterCheck(spent, next, ApproxDp{1.41, 1e-6});
  ASSERT_TRUE(tight.ok());
  ASSERT_TRUE(loose.ok());
  EXPECT_FALSE(*tight);
  EXPECT_TRUE(*loose);
}

TEST(FilterCheckTest, RdpBudgetNeedsOneOrder) {
  const size_t n = AlphaOrders::Default().size();
  RdpCurve budget = RdpCurve::Constant(1.0, n);
  RdpCurve spent = RdpCurve::Constant(2.0, n);
  spent[n / 2] = 0.5;
  absl::StatusOr<bool> ok =
      FilterCheck(spent, RdpCurve::Zero(n), RenyiDp{budget});
  ASSERT_TRUE(ok.ok());
  EXPECT_TRUE(*ok);
  absl::StatusOr<bool> over =
      FilterCheck(spent, RdpCurve::Constant(0.6, n), RenyiDp{budget});
  ASSERT_TRUE(over.ok());
  EXPECT_FALSE(*over);
}

TEST(ConvertUnitTest, FollowsGroupFactorsAndOrder) {
  absl::StatusOr<UnitRegistry> units = UnitRegistry::Create(
      {PrivacyUnit{.name = "user"},
       PrivacyUnit{.name = "user_day",
                   .group_factor_to = {{"user_month", 31}},
                   .ord_above = {"user_month"},
                   .time_based = true},
       PrivacyUnit{
           .name = "user_month", .ord_above = {"user"}, .time_based = true}});
  ASSERT_TRUE(units.ok()) << units.status();
  absl::StatusOr<PrivacyBudget> month =
      ConvertUnit(ZeroConcentratedDp{0.015}, "user_day", "user_month", *units);
  ASSERT_TRUE(month.ok());
  EXPECT_DOUBLE_EQ(month->get_if<ZeroConcentratedDp>()->rho, 14.415);
  // A user-level guarantee also holds for any finer unit.
  absl::StatusOr<PrivacyBudget> finer =
      ConvertUnit(PureDp{1}, "user", "user_month", *units);
  ASSERT_TRUE(finer.ok());
  EXPECT_EQ(*finer, PrivacyBudget(PureDp{1}));
  EXPECT_FALSE(ConvertUnit(PureDp{1}, "user_month", "user", *units).ok());
}

}  // namespace
}  // namespace policy_engine
