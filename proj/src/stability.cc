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
#include <limits>
#include <string>

namespace resmatch {

void CheckMatchingAgainstMarket(const MarketInstance& market,
                                const Matching& matching) {
  if (matching.applicant_count() != market.applicant_count() ||
      matching.program_count() != market.program_count()) {
    ThrowValidation("matching dimensions (" +
                    std::to_string(matching.applicant_count()) + " applicants, " +
                    std::to_string(matching.program_count()) +
                    " programs) do not fit the market");
  }
  for (int32_t a = 0; a < market.applicant_count(); ++a) {
    const std::optional<ProgramId> p = matching.ProgramOf(ApplicantId(a));
    if (!p) continue;
    if (p->value() < 0 || p->value() >= market.program_count()) {
      ThrowValidation("matching references unknown program index " +
                      std::to_string(p->value()));
    }
    if (static_cast<int>(matching.ApplicantsOf(*p).size()) >
        market.capacity(*p)) {
      ThrowValidation("program '" + market.program_name(*p) +
                      "' is over capacity");
    }
    if (!market.MutuallyRanked(ApplicantId(a), *p)) {
      ThrowValidation("matching pairs applicant '" +
                      market.applicant_name(ApplicantId(a)) +
                      "' with program '" + market.program_name(*p) +
                      "' but they did not rank each other");
    }
  }
}

std::vector<BlockingPair> FindBlockingPairs(const MarketInstance& market,
                                            const Matching& matching) {
  CheckMatchingAgainstMarket(market, matching);

  // Rank of each program's least preferred holder, or nullopt if a seat is
  // free.
  std::vector<std::optional<int>> worst_held(market.program_count());
  for (int32_t pi = 0; pi < market.program_count(); ++pi) {
    const ProgramId p(pi);
    const auto holders = matching.ApplicantsOf(p);
    if (static_cast<int>(holders.size()) < market.capacity(p)) continue;
    int worst = 0;
    for (const ApplicantId b : holders) {
      worst = std::max(worst, *market.ProgramRank(p, b));
    }
    worst_held[pi] = worst;
  }

  std::vector<BlockingPair> pairs;
  for (int32_t ai = 0; ai < market.applicant_count(); ++ai) {
    const ApplicantId a(ai);
    const std::optional<ProgramId> current = matching.ProgramOf(a);
    // Unmatched ranks below every listed program.
    const int current_rank = current ? *market.ApplicantRank(a, *current)
                                     : std::numeric_limits<int>::max();
    for (int32_t pi = 0; pi < market.program_count(); ++pi) {
      const ProgramId p(pi);
      const std::optional<int> r = market.ApplicantRank(a, p);
      const std::optional<int> rho = market.ProgramRank(p, a);
      if (!r || !rho) continue;
      if (*r >= current_rank) continue;
      if (worst_held[pi] && *rho >= *worst_held[pi]) continue;
      BlockingPair pair{a, p, std::nullopt, std::nullopt};
      if (current) pair.applicant_gain = current_rank - *r;
      if (worst_held[pi]) pair.program_gain = *worst_held[pi] - *rho;
      pairs.push_back(pair);
    }
  }
  return pairs;
}

bool IsStable(const MarketInstance& market, const Matching& matching) {
  return FindBlockingPairs(market, matching).empty();
}

}  // namespace resmatch
