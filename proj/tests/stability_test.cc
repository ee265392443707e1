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

#include "resmatch/stability.h"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "resmatch/engines.h"
#include "resmatch/market_io.h"
#include "test_util.h"

namespace resmatch {
namespace {

using ::resmatch::testing::MarketShape;

const std::filesystem::path kFixtures = RESMATCH_FIXTURE_DIR;

class TwoByTwoTest : public ::testing::Test {
 protected:
  MarketInstance m_ = ParseMarketFile(kFixtures / "two_by_two.csv");
  ApplicantId a_ = *m_.FindApplicant("A");
  ApplicantId b_ = *m_.FindApplicant("B");
  ProgramId alpha_ = *m_.FindProgram("alpha");
  ProgramId beta_ = *m_.FindProgram("beta");

  Matching Make(std::optional<ProgramId> for_a,
                std::optional<ProgramId> for_b) {
    std::vector<std::optional<ProgramId>> x(2);
    x[a_.value()] = for_a;
    x[b_.value()] = for_b;
    return Matching(m_, x);
  }
};

TEST_F(TwoByTwoTest, GaleShapleyOutcomeIsStable) {
  EXPECT_TRUE(IsStable(m_, Make(beta_, alpha_)));
  EXPECT_TRUE(FindBlockingPairs(m_, GaleShapley(m_, ProposingSide::kApplicants))
                  .empty());
}

TEST_F(TwoByTwoTest, OtherPerfectMatchingBlockedByBAlpha) {
  const auto pairs = FindBlockingPairs(m_, Make(alpha_, beta_));
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].applicant, b_);
  EXPECT_EQ(pairs[0].program, alpha_);
  EXPECT_EQ(pairs[0].applicant_gain, 1);
  EXPECT_EQ(pairs[0].program_gain, 1);
  EXPECT_FALSE(IsStable(m_, Make(alpha_, beta_)));
}

TEST_F(TwoByTwoTest, EmptyMatchingIsBlocked) {
  const auto pairs = FindBlockingPairs(m_, Matching::Empty(m_));
  // Every mutually ranked pair blocks, both gains unbounded.
  EXPECT_EQ(pairs.size(), 4u);
  for (const BlockingPair& bp : pairs) {
    EXPECT_EQ(bp.applicant_gain, std::nullopt);
    EXPECT_EQ(bp.program_gain, std::nullopt);
  }
}

TEST(StabilityTest, NonMutualPairRejected) {
  const MarketInstance m({"A"}, {"alpha"}, {1},
                         {PreferenceList<ProgramId>({ProgramId(0)}, 1)},
                         {PreferenceList<ApplicantId>({}, 1)});
  const Matching x(m, {ProgramId(0)});
  try {
    FindBlockingPairs(m, x);
    FAIL() << "expected a validation error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kValidation);
    EXPECT_NE(std::string(e.what()).find("'A'"), std::string::npos);
  }
}

TEST(StabilityTest, BostonPoolFixtureHasExactlyOneBlockingPair) {
  const MarketInstance m =
      ParseMarketFile(kFixtures / "boston_instability.csv");
  const auto pairs = FindBlockingPairs(m, BostonPool(m));
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].applicant, *m.FindApplicant("A"));
  EXPECT_EQ(pairs[0].program, *m.FindProgram("P2"));
  EXPECT_EQ(pairs[0].applicant_gain, std::nullopt);
  EXPECT_EQ(pairs[0].program_gain, 1);
}

std::vector<std::optional<ProgramId>> RandomMutualAssignment(
    std::mt19937_64& rng, const MarketInstance& m) {
  std::vector<std::optional<ProgramId>> x(m.applicant_count());
  std::vector<int> load(m.program_count(), 0);
  for (int a = 0; a < m.applicant_count(); ++a) {
    std::vector<ProgramId> options;
    for (const ProgramId p : m.applicant_prefs(ApplicantId(a)).order()) {
      if (m.MutuallyRanked(ApplicantId(a), p) &&
          load[p.value()] < m.capacity(p)) {
        options.push_back(p);
      }
    }
    if (options.empty() || testing::Draw(rng, 0, 3) == 0) continue;
    const ProgramId p =
        options[testing::Draw(rng, 0, static_cast<int>(options.size()) - 1)];
    ++load[p.value()];
    x[a] = p;
  }
  return x;
}

TEST(StabilityTest, AgreesWithOracle) {
  std::mt19937_64 rng(13);
  int stable_seen = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const MarketInstance m = testing::RandomStrictMarket(
        rng, {.max_applicants = 5, .max_programs = 3});
    const auto x = RandomMutualAssignment(rng, m);
    const bool stable = IsStable(m, Matching(m, x));
    EXPECT_EQ(stable, testing::OracleIsStable(m, x));
    const auto all = EnumerateStableMatchings(m);
    const bool listed = std::ranges::any_of(
        all, [&](const Matching& s) { return s.assignment() == x; });
    EXPECT_EQ(stable, listed);
    stable_seen += stable;
  }
  EXPECT_GT(stable_seen, 0);
}

TEST(StabilityTest, DroppedWitnessNeverReappears) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const MarketInstance m = testing::RandomStrictMarket(rng, MarketShape{});
    const auto x = RandomMutualAssignment(rng, m);
    const auto pairs = FindBlockingPairs(m, Matching(m, x));
    if (pairs.empty()) continue;
    const BlockingPair bp = pairs[testing::Draw(
        rng, 0, static_cast<int>(pairs.size()) - 1)];

    std::vector<PreferenceList<ProgramId>> ap;
    for (int a = 0; a < m.applicant_count(); ++a) {
      std::vector<ProgramId> list;
      for (const ProgramId p : m.applicant_prefs(ApplicantId(a)).order()) {
        if (ApplicantId(a) == bp.applicant && p == bp.program) continue;
        list.push_back(p);
      }
      ap.emplace_back(std::move(list), m.program_count());
    }
    std::vector<ProgramPreferences> pp;
    for (int p = 0; p < m.program_count(); ++p) {
      pp.push_back(m.program_prefs(ProgramId(p)));
    }
    const MarketInstance cut(
        {m.applicant_names().begin(), m.applicant_names().end()},
        {m.program_names().begin(), m.program_names().end()},
        {m.capacities().begin(), m.capacities().end()}, std::move(ap),
        std::move(pp));
    // The witness's own assignment is untouched, so the matching stays valid.
    for (const BlockingPair& again : FindBlockingPairs(cut, Matching(cut, x))) {
      EXPECT_FALSE(again.applicant == bp.applicant &&
                   again.program == bp.program);
    }
  }
}

TEST(StabilityTest, LargeMarketScalingSmoke) {
  std::mt19937_64 rng(19);
  double seconds[2];
  for (int i = 0; i < 2; ++i) {
    const int n = 1000 * (i + 1);
    const MarketInstance m = testing::RandomStrictMarket(
        rng, {.min_applicants = n, .max_applicants = n, .min_programs = 100,
              .max_programs = 100, .max_capacity = 10, .keep = 0.2});
    const Matching x = GaleShapley(m, ProposingSide::kApplicants);
    const auto start = std::chrono::steady_clock::now();
    EXPECT_TRUE(FindBlockingPairs(m, x).empty());
    seconds[i] = std::chrono::duration<double>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  }
  // Linear in N at fixed P; allow generous slack for timer noise.
  EXPECT_LT(seconds[1], 10 * seconds[0] + 0.05);
}

}  // namespace
}  // namespace resmatch
