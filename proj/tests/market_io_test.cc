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

#include "resmatch/market_io.h"

#include <filesystem>
#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "resmatch/engines.h"
#include "test_util.h"

namespace resmatch {
namespace {

using ::resmatch::testing::MarketShape;

const std::filesystem::path kFixtures = RESMATCH_FIXTURE_DIR;

MarketInstance FromCsv(const std::string& text) {
  std::istringstream in(text);
  return ValidateMarket(ReadMarketCsv(in, "mem.csv"));
}

MarketInstance FromJson(const std::string& text) {
  std::istringstream in(text);
  return ValidateMarket(ReadMarketJson(in, "mem.json"));
}

// Returns the error message; fails the test if nothing is thrown or the
// kind differs.
std::string ErrorOf(ErrorKind kind, auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "no error thrown";
  return "";
}

TEST(MarketCsvTest, MinimalFixture) {
  const MarketInstance m = ParseMarketFile(kFixtures / "minimal.csv");
  EXPECT_EQ(m.applicant_count(), 1);
  EXPECT_EQ(m.program_count(), 1);
  EXPECT_EQ(m.total_seats(), 1);
  EXPECT_EQ(m.ApplicantRank(ApplicantId(0), ProgramId(0)), 1);
}

TEST(MarketCsvTest, RankGapNamesTheRow) {
  const std::string msg = ErrorOf(ErrorKind::kValidation, [] {
    ParseMarketFile(kFixtures / "rank_gap.csv");
  });
  EXPECT_NE(msg.find("rank_gap.csv:5"), std::string::npos) << msg;
  EXPECT_NE(msg.find("rank gap"), std::string::npos) << msg;
}

TEST(MarketCsvTest, BostonFixtureIsTheHandTracedInstance) {
  const MarketInstance m =
      ParseMarketFile(kFixtures / "boston_instability.csv");
  const MarketInstance expected(
      {"A", "B", "C"}, {"P1", "P2"}, {1, 1},
      {PreferenceList<ProgramId>({ProgramId(0), ProgramId(1)}, 2),
       PreferenceList<ProgramId>({ProgramId(1)}, 2),
       PreferenceList<ProgramId>({ProgramId(0)}, 2)},
      {TieredPreferenceList({{ApplicantId(2)}, {ApplicantId(0)}}, 3),
       TieredPreferenceList({{ApplicantId(0)}, {ApplicantId(1)}}, 3)});
  EXPECT_EQ(m, expected);
}

TEST(MarketCsvTest, JsonFixtureMatchesCsvFixture) {
  EXPECT_EQ(ParseMarketFile(kFixtures / "two_by_two.json"),
            ParseMarketFile(kFixtures / "two_by_two.csv"));
}

TEST(MarketCsvTest, ParseErrorsCarryLineAndField) {
  std::string msg = ErrorOf(ErrorKind::kParse, [] {
    FromCsv("capacity,alpha,1,,\napplicant,A,one,,alpha\n");
  });
  EXPECT_NE(msg.find("mem.csv:2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("rank_or_tier"), std::string::npos) << msg;

  msg = ErrorOf(ErrorKind::kParse, [] { FromCsv("applicant,A,1,alpha\n"); });
  EXPECT_NE(msg.find("mem.csv:1"), std::string::npos) << msg;

  msg = ErrorOf(ErrorKind::kParse, [] { FromCsv("hospital,H,1,,A\n"); });
  EXPECT_NE(msg.find("side"), std::string::npos) << msg;

  msg = ErrorOf(ErrorKind::kParse, [] { FromCsv("capacity,alpha,,,\n"); });
  EXPECT_NE(msg.find("capacity"), std::string::npos) << msg;
}

TEST(MarketCsvTest, ValidationErrorsSurfaceVerbatim) {
  const std::string msg = ErrorOf(ErrorKind::kValidation, [] {
    FromCsv("capacity,alpha,1,,\napplicant,A,1,,alpha\napplicant,A,2,,alpha\n");
  });
  EXPECT_NE(msg.find("mem.csv:3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("twice"), std::string::npos) << msg;

  ErrorOf(ErrorKind::kValidation,
          [] { FromCsv("capacity,alpha,0,,\n"); });
  ErrorOf(ErrorKind::kValidation,
          [] { FromCsv("program,alpha,1,,A\napplicant,A,,,\n"); });
}

TEST(MarketCsvTest, CommentsBlankLinesAndDeclarations) {
  const MarketInstance m = FromCsv(
      "# header comment\n\n"
      "side,id,rank_or_tier,within_tier,counterpart_id\n"
      "capacity,alpha,2,,\n"
      "applicant,Z,,,\n"
      "  applicant , A , 1 , , alpha \n");
  EXPECT_EQ(m.applicant_count(), 2);
  EXPECT_TRUE(m.applicant_prefs(*m.FindApplicant("Z")).empty());
  EXPECT_EQ(m.capacity(ProgramId(0)), 2);
}

TEST(MarketJsonTest, Errors) {
  ErrorOf(ErrorKind::kParse, [] { FromJson("{"); });
  ErrorOf(ErrorKind::kParse, [] { FromJson("[]"); });
  ErrorOf(ErrorKind::kParse, [] { FromJson(R"({"sellers": {}})"); });
  const std::string msg = ErrorOf(ErrorKind::kParse, [] {
    FromJson(R"({"programs": {"alpha": {"capacity": "two"}}})");
  });
  EXPECT_NE(msg.find("programs.alpha.capacity"), std::string::npos) << msg;
  ErrorOf(ErrorKind::kValidation, [] {
    FromJson(R"({"programs": {"alpha": {"capacity": 1, "tiers": [[]]}}})");
  });
  ErrorOf(ErrorKind::kValidation, [] {
    FromJson(R"({"applicants": {"A": ["beta"]},
                 "programs": {"alpha": {"capacity": 1}}})");
  });
}

TEST(MarketIoTest, MissingFileIsAnIoError) {
  ErrorOf(ErrorKind::kIo, [] { ParseMarketFile(kFixtures / "nope.csv"); });
}

TEST(MarketIoTest, CsvAndJsonRoundTrip) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 400; ++trial) {
    MarketShape shape;
    shape.max_applicants = 12;
    const MarketInstance random = trial % 2 == 0
                                      ? testing::RandomStrictMarket(rng, shape)
                                      : testing::RandomTieredMarket(rng, shape);
    // Canonical id order is by name.
    const MarketInstance m = ValidateMarket(ToRaw(random));
    std::ostringstream csv, json;
    WriteMarketCsv(csv, m);
    WriteMarketJson(json, m);
    EXPECT_EQ(FromCsv(csv.str()), m);
    EXPECT_EQ(FromJson(json.str()), m);
    std::ostringstream again;
    WriteMarketCsv(again, FromCsv(csv.str()));
    EXPECT_EQ(again.str(), csv.str());
  }
}

TEST(MatchingCsvTest, RoundTripAndErrors) {
  const MarketInstance m = ParseMarketFile(kFixtures / "two_by_two.csv");
  const Matching x = GaleShapley(m, ProposingSide::kApplicants);
  std::ostringstream out;
  WriteMatchingCsv(out, m, x);
  EXPECT_EQ(out.str(), "applicant,program\nA,beta\nB,alpha\n");
  std::istringstream in(out.str());
  EXPECT_EQ(ReadMatchingCsv(in, m, "m.csv"), x);

  auto read = [&](const std::string& text) {
    std::istringstream s(text);
    return ReadMatchingCsv(s, m, "m.csv");
  };
  EXPECT_EQ(read("applicant,program\nA,\nB,\n").matched_count(), 0);
  ErrorOf(ErrorKind::kParse, [&] { read("A,beta\nB,alpha\n"); });
  ErrorOf(ErrorKind::kParse, [&] { read(""); });
  ErrorOf(ErrorKind::kValidation, [&] { read("applicant,program\nA,beta\n"); });
  ErrorOf(ErrorKind::kValidation,
          [&] { read("applicant,program\nA,beta\nA,beta\nB,\n"); });
  ErrorOf(ErrorKind::kValidation,
          [&] { read("applicant,program\nA,gamma\nB,\n"); });
  const std::string msg = ErrorOf(ErrorKind::kValidation, [&] {
    read("applicant,program\nA,alpha\nB,alpha\n");
  });
  EXPECT_NE(msg.find("capacity"), std::string::npos) << msg;
}

TEST(TraceEventJsonTest, Shapes) {
  const MarketInstance m = ParseMarketFile(kFixtures / "two_by_two.csv");
  TraceEvent e;
  e.kind = TraceEvent::Kind::kPropose;
  e.applicant = ApplicantId(0);
  e.program = ProgramId(1);
  EXPECT_EQ(TraceEventJson(m, e),
            R"({"event":"propose","proposer":"applicant","applicant":"A","program":"beta"})");
  TraceEvent step;
  step.kind = TraceEvent::Kind::kStep;
  step.step = PairingStep{2, 1};
  EXPECT_EQ(TraceEventJson(m, step), R"({"event":"step","tier":2,"rank":1})");
}

}  // namespace
}  // namespace resmatch
