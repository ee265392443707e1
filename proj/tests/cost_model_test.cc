// Copyright 2026 The Resmatch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "resmatch/cost_model.h"

#include <cmath>
#include <random>
#include <set>

#include "cost_oracle.h"
#include "gtest/gtest.h"
#include "resmatch/config.h"

namespace resmatch {
namespace {

using ::resmatch::testing::Draw;

Money Dollars(int64_t d) { return Money::FromCents(d * 100); }

FeeSchedule DefaultSchedule() {
  return FeeSchedule({{1, 10, FeeTier::Kind::kFlat, Dollars(60)},
                      {11, 40, FeeTier::Kind::kPerApplication, Dollars(15)},
                      {41, std::nullopt, FeeTier::Kind::kPerApplication,
                       Dollars(35)}});
}

CostSpec DefaultSpec() {
  CostSpec spec;
  spec.fees = DefaultSchedule();
  spec.terms.interview_prob = 1.0 / 7.0;
  spec.terms.interview_cost = Dollars(404);
  spec.terms.interview_time = 1;
  spec.terms.payoff_if_interviewed = Dollars(366000);
  return spec;
}

TEST(FeeScheduleTest, CalibrationPoints) {
  // 60 + 30 * 15 + 76 * 35 = 3170
  EXPECT_EQ(60 + 30 * 15 + 76 * 35, 3170);
  const FeeSchedule fees = DefaultSchedule();
  EXPECT_EQ(fees.CostOf(0).cents(), 0);
  EXPECT_EQ(fees.CostOf(1).cents(), 6000);
  EXPECT_EQ(fees.CostOf(10).cents(), 6000);
  EXPECT_EQ(fees.CostOf(11).cents(), 7500);
  EXPECT_EQ(fees.CostOf(40).cents(), 51000);
  EXPECT_EQ(fees.CostOf(116).cents(), 317000);
}

TEST(FeeScheduleTest, ShippedConfigMatchesDefault) {
  const CostConfig config = LoadCostConfig(
      std::filesystem::path(RESMATCH_CONFIG_DIR_FOR_TESTS) / "ophtho2019.cfg");
  const FeeSchedule fees = DefaultSchedule();
  for (int q = 0; q <= 200; ++q) {
    EXPECT_EQ(config.spec.fees.CostOf(q), fees.CostOf(q)) << q;
  }
  EXPECT_EQ(config.programs, 116);
}

TEST(FeeScheduleTest, MarginalCostIsAScheduleFeeOrZero) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    const auto spec = testing::RandomOracleSpec(rng);
    const FeeSchedule fees(spec.tiers);
    std::set<int64_t> allowed = {0};
    for (const FeeTier& t : spec.tiers) allowed.insert(t.fee.cents());
    for (int q = 0; q < 150; ++q) {
      const int64_t step = (fees.CostOf(q + 1) - fees.CostOf(q)).cents();
      EXPECT_GE(step, 0);
      EXPECT_TRUE(allowed.contains(step)) << step;
    }
  }
}

TEST(FeeScheduleTest, RejectsBrokenTiers) {
  using K = FeeTier::Kind;
  EXPECT_THROW(FeeSchedule(std::vector<FeeTier>{}), Error);
  EXPECT_THROW(FeeSchedule({{2, std::nullopt, K::kFlat, Dollars(1)}}), Error);
  EXPECT_THROW(FeeSchedule({{1, 5, K::kFlat, Dollars(1)}}), Error);
  EXPECT_THROW(FeeSchedule({{1, 5, K::kFlat, Dollars(1)},
                            {7, std::nullopt, K::kFlat, Dollars(1)}}),
               Error);
  EXPECT_THROW(FeeSchedule({{1, std::nullopt, K::kFlat, Dollars(-1)}}), Error);
  EXPECT_THROW(DefaultSchedule().CostOf(-1), Error);
}

TEST(FormatDollarsTest, Grouping) {
  EXPECT_EQ(FormatDollars(986485.714), "$9,864.86");
  EXPECT_EQ(FormatDollars(6000), "$60.00");
  EXPECT_EQ(FormatDollars(-150), "-$1.50");
  EXPECT_EQ(FormatDollars(123456789), "$1,234,567.89");
}

TEST(ExpectedProgramPayoffTest, Examples) {
  ProgramTerms t;
  t.interview_prob = 1.0 / 7.0;
  t.payoff_if_interviewed = Dollars(7000);
  t.interview_cost = Dollars(404);
  EXPECT_NEAR(ExpectedProgramPayoff(t) / 100, 942.2857142857, 1e-9);

  t.interview_prob = 0;
  t.payoff_if_rejected = Dollars(3);
  EXPECT_EQ(ExpectedProgramPayoff(t), 300);

  t.interview_prob = 1;
  t.interview_cost = Money();
  EXPECT_EQ(ExpectedProgramPayoff(t), 700000);
}

TEST(TotalExpectedPayoffTest, NonParticipation) {
  const auto out = TotalExpectedPayoff(0, DefaultSpec(), {Money(), 0});
  EXPECT_EQ(out.value_cents, 0);
  EXPECT_TRUE(out.feasible);
}

TEST(TotalExpectedPayoffTest, AllOphthalmologyPrograms) {
  const auto out =
      TotalExpectedPayoff(116, DefaultSpec(), {Dollars(15000), 30});
  EXPECT_EQ(out.application_cost.cents(), 317000);
  EXPECT_NEAR(out.expected_interviews, 16.571428571, 1e-6);
  EXPECT_NEAR(out.expected_spend_cents, 317000 + 116.0 / 7.0 * 40400, 1e-6);
  EXPECT_EQ(FormatDollars(out.expected_spend_cents), "$9,864.86");
  EXPECT_TRUE(out.feasible);
}

TEST(TotalExpectedPayoffTest, CannotAffordOneApplication) {
  const auto out = TotalExpectedPayoff(1, DefaultSpec(), {Dollars(59), 100});
  EXPECT_FALSE(out.feasible);
}

TEST(TotalExpectedPayoffTest, WorstCaseChargesEveryInterview) {
  const CostSpec spec = DefaultSpec();
  const Budget budget{Dollars(1'000'000), 1000};
  const auto expected = TotalExpectedPayoff(7, spec, budget);
  const auto worst =
      TotalExpectedPayoff(7, spec, budget, BudgetReading::kWorstCase);
  EXPECT_NEAR(expected.expected_spend_cents, 6000 + 40400, 1e-6);
  EXPECT_NEAR(worst.expected_spend_cents, 6000 + 7 * 40400, 1e-6);
  EXPECT_EQ(worst.value_cents, expected.value_cents);
}

TEST(TotalExpectedPayoffTest, OverridesApplyPerApplication) {
  CostSpec spec = DefaultSpec();
  ProgramTerms sure = spec.terms;
  sure.interview_prob = 1;
  spec.overrides[2] = sure;
  const auto out = TotalExpectedPayoff(3, spec, {Dollars(100000), 100});
  EXPECT_NEAR(out.expected_interviews, 1 + 2.0 / 7.0, 1e-12);
}

TEST(TotalExpectedPayoffTest, FeasibilityIsMonotone) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = testing::RandomOracleSpec(rng);
    const CostSpec spec = s.ToSpec();
    bool was_feasible = true;
    for (int q = 0; q <= 150; ++q) {
      const bool feasible = TotalExpectedPayoff(q, spec, s.ToBudget()).feasible;
      if (!was_feasible) EXPECT_FALSE(feasible) << q;
      was_feasible = feasible;
    }
  }
}

TEST(OptimalApplicationCountTest, ZeroCostsApplyEverywhere) {
  CostSpec spec;
  spec.fees = FeeSchedule({{1, std::nullopt, FeeTier::Kind::kPerApplication,
                            Money()}});
  spec.terms.interview_prob = 0.25;
  spec.terms.payoff_if_interviewed = Dollars(10);
  for (const int q_max : {0, 1, 20, 116}) {
    EXPECT_EQ(OptimalApplicationCount(spec, {Money(), 0}, q_max).applications,
              q_max);
  }
}

TEST(OptimalApplicationCountTest, NegativeProgramPayoffStaysHome) {
  CostSpec spec = DefaultSpec();
  spec.terms.payoff_if_interviewed = Dollars(1);
  spec.terms.interview_cost = Dollars(100000);
  ASSERT_LT(ExpectedProgramPayoff(spec.terms), 0);
  const auto best = OptimalApplicationCount(spec, {Dollars(1'000'000), 1e6}, 116);
  EXPECT_EQ(best.applications, 0);
  EXPECT_EQ(best.value_cents, 0);
}

TEST(OptimalApplicationCountTest, DefaultSpecAppliesToAll116) {
  const auto best =
      OptimalApplicationCount(DefaultSpec(), {Dollars(15000), 30}, 116);
  EXPECT_EQ(best.applications, 116);
  EXPECT_EQ(FormatDollars(best.expected_spend_cents), "$9,864.86");
}

TEST(OptimalApplicationCountTest, BindingBudgetStopsEarly) {
  // $60 buys the first ten applications and nothing more.
  CostSpec spec = DefaultSpec();
  spec.terms.interview_cost = Money();
  const auto best = OptimalApplicationCount(spec, {Dollars(60), 1e6}, 116);
  EXPECT_EQ(best.applications, 10);
}

TEST(OptimalApplicationCountTest, AgreesWithClosedFormOracle) {
  std::mt19937_64 rng(57);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto s = testing::RandomOracleSpec(rng);
    const auto got = OptimalApplicationCount(s.ToSpec(), s.ToBudget(), s.q_max);
    const auto want = testing::OracleOptimum(s);
    ASSERT_EQ(got.applications, want.q) << "trial " << trial;
    EXPECT_EQ(got.value_cents * 8, static_cast<double>(want.value_x8));
  }
}

TEST(CostSpecTest, ValidateRejectsBadTerms) {
  CostSpec spec = DefaultSpec();
  spec.terms.interview_prob = 1.5;
  EXPECT_THROW(spec.Validate(), Error);
  spec = DefaultSpec();
  spec.terms.payoff_if_rejected = Dollars(400000);
  EXPECT_THROW(spec.Validate(), Error);
  spec = DefaultSpec();
  spec.overrides[0] = spec.terms;
  EXPECT_THROW(spec.Validate(), Error);
  EXPECT_NO_THROW(DefaultSpec().Validate());
}

}  // namespace
}  // namespace resmatch
