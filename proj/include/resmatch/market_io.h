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

// Market, matching and trace file formats.
//
// Market CSV, one record per line (blank lines and '#' comments skipped, an
// optional header line allowed):
//
//   side,id,rank_or_tier,within_tier,counterpart_id
//   capacity,P1,2,,          program P1 with 2 seats (declares P1)
//   applicant,A,1,,P1        A ranks P1 first
//   applicant,X,,,           declares an applicant with an empty list
//   program,P1,1,,A          strict list: P1 ranks A first
//   program,P2,1,2,B         tiered list: B is 2nd within P2's tier 1
//
// Market JSON mirrors the instance:
//
//   {"applicants": {"A": ["P1", "P2"]},
//    "programs": {"P1": {"capacity": 1, "ranking": ["A"]},
//                 "P2": {"capacity": 1, "tiers": [["A"], ["B"]]}}}
//
// Matching CSV: header "applicant,program", one row per applicant, empty
// program for unmatched applicants.

#ifndef RESMATCH_MARKET_IO_H_
#define RESMATCH_MARKET_IO_H_

#include <filesystem>
#include <iosfwd>
#include <string>

#include "resmatch/engines.h"
#include "resmatch/market.h"

namespace resmatch {

// Throws kIo if the file cannot be read.
std::string ReadFileContents(const std::filesystem::path& path);

RawMarket ReadMarketCsv(std::istream& in, const std::string& source);
RawMarket ReadMarketJson(std::istream& in, const std::string& source);

// JSON when the extension is .json, CSV otherwise.
MarketInstance ParseMarketFile(const std::filesystem::path& path);

void WriteMarketCsv(std::ostream& out, const MarketInstance& market);
void WriteMarketJson(std::ostream& out, const MarketInstance& market);

Matching ReadMatchingCsv(std::istream& in, const MarketInstance& market,
                         const std::string& source);
void WriteMatchingCsv(std::ostream& out, const MarketInstance& market,
                      const Matching& matching);

// One JSON object per line.
std::string TraceEventJson(const MarketInstance& market,
                           const TraceEvent& event);

}  // namespace resmatch

#endif  // RESMATCH_MARKET_IO_H_
