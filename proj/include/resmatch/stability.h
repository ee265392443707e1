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

#ifndef RESMATCH_STABILITY_H_
#define RESMATCH_STABILITY_H_

#include <optional>
#include <vector>

#include "resmatch/market.h"

namespace resmatch {

// An applicant and a program that rank each other and would both rather be
// together. Gains are rank improvements; std::nullopt stands for an
// unbounded gain (the applicant is unmatched, or the program has a free seat).
struct BlockingPair {
  ApplicantId applicant;
  ProgramId program;
  std::optional<int> applicant_gain;
  std::optional<int> program_gain;

  friend bool operator==(const BlockingPair&, const BlockingPair&) = default;
};

// Throws kValidation when the matching does not fit the market or pairs an
// applicant with a program that the two did not both rank.
void CheckMatchingAgainstMarket(const MarketInstance& market,
                                const Matching& matching);

// All blocking pairs ordered by (applicant, program) id. Tiered program
// lists compare applicants by (tier, within-tier position).
std::vector<BlockingPair> FindBlockingPairs(const MarketInstance& market,
                                            const Matching& matching);

bool IsStable(const MarketInstance& market, const Matching& matching);

}  // namespace resmatch

#endif  // RESMATCH_STABILITY_H_
