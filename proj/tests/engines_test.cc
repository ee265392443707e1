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

#include "resmatch/engines.h"

#include <algorithm>
#include <filesystem>
#include <random>
#include <ranges>
#include <vector>

#include "gtest/gtest.h"
#include "resmatch/market_io.h"
#include "resmatch/pairing_order.h"
#include "test_util.h"

namespace resmatch {
namespace {

using ::resmatch::testing::Assignment;
using ::resmatch::testing::MarketShape;

const std::filesystem::path kFixtures = RESMATCH_FIXTURE_DIR;

std::optional<ProgramId> Partner(const MarketInstance& m, const Matching& x,
                                 const char* applicant) {
  return x.ProgramOf(*m.FindApplicant(applicant));
}

ProgramId P(const MarketInstance& m, const char* name) {
  return *m.FindProgram(name);
}

MarketInstance OneByOne() {
  return MarketInstance({"A"}, {"alpha"}, {1},
                        {PreferenceList<ProgramId>({ProgramId(0)}, 1)},
                        {PreferenceList<ApplicantId>({ApplicantId(0)}, 1)});
}

// Unmatched sorts last, as in the enumeration's canonical order.
std::vector<int> Key(const Assignment& x) {
  std::vector<int> key;
  for (const auto& p : x) key.push_back(p ? p->value() : 1 << 20);
  return key;
}

TEST(PairingOrderTest, FirstNineSteps) {
  const std::vector<PairingStep> expected = {{1, 1}, {2, 1}, {1, 2},
                                             {2, 2}, {3, 1}, {3, 2},
                                             {1, 3}, {2, 3}, {3, 3}};
  std::vector<PairingStep> got;
  for (const PairingStep s : PairingOrder() | std::views::take(9)) {
    got.push_back(s);
  }
  EXPECT_EQ(got, expected);
  EXPECT_EQ(PairingStepsThrough(3), expected);
}

TEST(PairingOrderTest, EachDiagonalCoversItsSquareOnce) {
  for (int d = 1; d <= 8; ++d) {
    const auto steps = PairingStepsThrough(d);
    ASSERT_EQ(static_cast<int>(steps.size()), d * d);
    std::vector<std::vector<int>> hits(d + 1, std::vector<int>(d + 1, 0));
    for (const PairingStep s : steps) ++hits[s.tier][s.rank];
    for (int t = 1; t <= d; ++t) {
      for (int r = 1; r <= d; ++r) EXPECT_EQ(hits[t][r], 1);
    }
  }
}

TEST(GaleShapleyTest, MutualUniquePairEitherSide) {
  const MarketInstance m = OneByOne();
  for (const auto side : {ProposingSide::kApplicants, ProposingSide::kPrograms}) {
    const Matching x = GaleShapley(m, side);
    EXPECT_EQ(x.ProgramOf(ApplicantId(0)), ProgramId(0));
  }
}

TEST(GaleShapleyTest, TwoByTwoFixture) {
  const MarketInstance m = ParseMarketFile(kFixtures / "two_by_two.csv");
  for (const auto side : {ProposingSide::kApplicants, ProposingSide::kPrograms}) {
    const Matching x = GaleShapley(m, side);
    EXPECT_EQ(Partner(m, x, "A"), P(m, "beta"));
    EXPECT_EQ(Partner(m, x, "B"), P(m, "alpha"));
  }
}

TEST(GaleShapleyTest, OneSidedRankingLeavesApplicantUnmatched) {
  const MarketInstance m({"A"}, {"alpha"}, {1},
                         {PreferenceList<ProgramId>({ProgramId(0)}, 1)},
                         {PreferenceList<ApplicantId>({}, 1)});
  for (const auto side : {ProposingSide::kApplicants, ProposingSide::kPrograms}) {
    EXPECT_EQ(GaleShapley(m, side).ProgramOf(ApplicantId(0)), std::nullopt);
  }
}

TEST(GaleShapleyTest, RejectsTieredLists) {
  const MarketInstance m =
      ParseMarketFile(kFixtures / "boston_instability.csv");
  EXPECT_THROW(GaleShapley(m, ProposingSide::kApplicants), Error);
}

TEST(GaleShapleyTest, TraceRecordsEveryProposal) {
  const MarketInstance m = ParseMarketFile(kFixtures / "two_by_two.csv");
  std::vector<TraceEvent> events;
  GaleShapley(m, ProposingSide::kApplicants,
              [&](const TraceEvent& e) { events.push_back(e); });
  const auto count = [&](TraceEvent::Kind k) {
    return std::ranges::count_if(events,
                                 [&](const TraceEvent& e) { return e.kind == k; });
  };
  // A and B both propose to alpha; alpha keeps B; A moves on to beta.
  EXPECT_EQ(count(TraceEvent::Kind::kPropose), 3);
  EXPECT_EQ(count(TraceEvent::Kind::kReject) + count(TraceEvent::Kind::kDisplace),
            1);
}

TEST(BostonPoolTest, InstabilityFixture) {
  const MarketInstance m =
      ParseMarketFile(kFixtures / "boston_instability.csv");
  std::vector<TraceEvent> assigns;
  const Matching x = BostonPool(m, [&](const TraceEvent& e) {
    if (e.kind == TraceEvent::Kind::kAssign) assigns.push_back(e);
  });
  EXPECT_EQ(Partner(m, x, "C"), P(m, "P1"));
  EXPECT_EQ(Partner(m, x, "B"), P(m, "P2"));
  EXPECT_EQ(Partner(m, x, "A"), std::nullopt);
  ASSERT_EQ(assigns.size(), 2u);
  EXPECT_EQ(assigns[0].step, (PairingStep{1, 1}));
  EXPECT_EQ(assigns[0].applicant, m.FindApplicant("C"));
  EXPECT_EQ(assigns[1].step, (PairingStep{2, 1}));
  EXPECT_EQ(assigns[1].applicant, m.FindApplicant("B"));
}

TEST(BostonPoolTest, FlattenedInstanceUnderGaleShapley) {
  const MarketInstance m =
      FlattenTiers(ParseMarketFile(kFixtures / "boston_instability.csv"));
  const Matching x = GaleShapley(m, ProposingSide::kApplicants);
  EXPECT_EQ(Partner(m, x, "C"), P(m, "P1"));
  EXPECT_EQ(Partner(m, x, "A"), P(m, "P2"));
  EXPECT_EQ(Partner(m, x, "B"), std::nullopt);
  EXPECT_TRUE(testing::OracleIsStable(m, x.assignment()));
}

TEST(BostonPoolTest, MutualFirstChoiceMatchesAtFirstStep) {
  const MarketInstance m(
      {"A"}, {"alpha"}, {1}, {PreferenceList<ProgramId>({ProgramId(0)}, 1)},
      {TieredPreferenceList({{ApplicantId(0)}}, 1)});
  std::vector<PairingStep> steps;
  const Matching x = BostonPool(m, [&](const TraceEvent& e) {
    if (e.kind == TraceEvent::Kind::kAssign) steps.push_back(*e.step);
  });
  EXPECT_EQ(x.ProgramOf(ApplicantId(0)), ProgramId(0));
  EXPECT_EQ(steps, (std::vector<PairingStep>{{1, 1}}));
}

TEST(BostonPoolTest, RejectsStrictLists) {
  EXPECT_THROW(BostonPool(OneByOne()), Error);
}

TEST(BostonPoolTest, FinalMatchesWithinCapacity) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    const MarketInstance m = testing::RandomTieredMarket(rng, MarketShape{});
    std::vector<int> assigned_times(m.applicant_count(), 0);
    std::vector<int> load(m.program_count(), 0);
    const Matching x = BostonPool(m, [&](const TraceEvent& e) {
      if (e.kind != TraceEvent::Kind::kAssign) return;
      ++assigned_times[e.applicant->value()];
      ++load[e.program->value()];
      EXPECT_LE(load[e.program->value()], m.capacity(*e.program));
      EXPECT_TRUE(m.MutuallyRanked(*e.applicant, *e.program));
    });
    for (int a = 0; a < m.applicant_count(); ++a) {
      EXPECT_LE(assigned_times[a], 1);
      EXPECT_EQ(assigned_times[a] == 1, x.ProgramOf(ApplicantId(a)).has_value());
    }
  }
}

TEST(EnumerateStableMatchingsTest, TwoByTwoHasOneStableMatching) {
  const MarketInstance m = ParseMarketFile(kFixtures / "two_by_two.csv");
  const auto all = EnumerateStableMatchings(m);
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(Partner(m, all[0], "A"), P(m, "beta"));
  EXPECT_EQ(Partner(m, all[0], "B"), P(m, "alpha"));
}

TEST(EnumerateStableMatchingsTest, EmptyMarket) {
  const MarketInstance m({}, {}, {}, {}, {});
  const auto all = EnumerateStableMatchings(m);
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(all[0].matched_count(), 0);
}

TEST(EnumerateStableMatchingsTest, IsolatedApplicantStaysUnmatched) {
  const MarketInstance m(
      {"A", "Z"}, {"alpha"}, {1},
      {PreferenceList<ProgramId>({ProgramId(0)}, 1),
       PreferenceList<ProgramId>({}, 1)},
      {PreferenceList<ApplicantId>({ApplicantId(0)}, 2)});
  const auto all = EnumerateStableMatchings(m);
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(all[0].ProgramOf(ApplicantId(0)), ProgramId(0));
  EXPECT_EQ(all[0].ProgramOf(ApplicantId(1)), std::nullopt);
}

TEST(EnumerateStableMatchingsTest, GuardLimit) {
  const MarketInstance m = ParseMarketFile(kFixtures / "two_by_two.csv");
  // (1 + 2) * (1 + 2) = 9 candidate assignments.
  EXPECT_NO_THROW(EnumerateStableMatchings(m, {.max_assignments = 9}));
  try {
    EnumerateStableMatchings(m, {.max_assignments = 8});
    FAIL() << "guard did not trip";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kGuardLimit);
  }
}

TEST(EnumerateStableMatchingsTest, AgreesWithBruteForceOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 400; ++trial) {
    const MarketInstance m = testing::RandomStrictMarket(
        rng, {.max_applicants = 6, .max_programs = 3});
    std::vector<std::vector<int>> lib, oracle;
    for (const Matching& x : EnumerateStableMatchings(m)) {
      lib.push_back(Key(x.assignment()));
    }
    for (const Assignment& x : testing::OracleStableAssignments(m)) {
      oracle.push_back(Key(x));
    }
    EXPECT_TRUE(std::ranges::is_sorted(lib));
    std::ranges::sort(oracle);
    EXPECT_EQ(lib, oracle);
  }
}

// Proposing side gets its best stable partner; the other side its worst.
TEST(GaleShapleyTest, SideOptimalAgainstOracle) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 400; ++trial) {
    const MarketInstance m = testing::RandomStrictMarket(rng, MarketShape{});
    const auto stable = testing::OracleStableAssignments(m);
    const Matching by_applicants = GaleShapley(m, ProposingSide::kApplicants);
    const Matching by_programs = GaleShapley(m, ProposingSide::kPrograms);
    for (const Matching* x : {&by_applicants, &by_programs}) {
      EXPECT_NE(std::ranges::find(stable, x->assignment()), stable.end());
      for (int a = 0; a < m.applicant_count(); ++a) {
        const auto p = x->ProgramOf(ApplicantId(a));
        if (p) EXPECT_TRUE(m.MutuallyRanked(ApplicantId(a), *p));
      }
    }
    auto rank = [&](int a, const std::optional<ProgramId>& p) {
      return p ? *m.ApplicantRank(ApplicantId(a), *p) : 1 << 20;
    };
    for (const Assignment& other : stable) {
      for (int a = 0; a < m.applicant_count(); ++a) {
        EXPECT_LE(rank(a, by_applicants.ProgramOf(ApplicantId(a))),
                  rank(a, other[a]));
        EXPECT_GE(rank(a, by_programs.ProgramOf(ApplicantId(a))),
                  rank(a, other[a]));
      }
    }
  }
}

}  // namespace
}  // namespace resmatch
