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

// Result emitters shared by the command-line tool. Numeric files are
// deterministic: money in integer cents, reals in fixed notation.

#ifndef RESMATCH_REPORT_H_
#define RESMATCH_REPORT_H_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "resmatch/cost_model.h"
#include "resmatch/market.h"
#include "resmatch/payoff.h"
#include "resmatch/simulator.h"
#include "resmatch/stability.h"

namespace resmatch {

// One line per blocking pair, then "STABLE, 0 blocking pairs" or
// "UNSTABLE, <n> blocking pairs".
void WriteStabilityReport(std::ostream& out, const MarketInstance& market,
                          std::span<const BlockingPair> pairs);

// Columns: q,application_cost_cents,expected_interviews,
// expected_payoff_cents,feasible
void WriteCostCsv(std::ostream& out,
                  std::span<const ApplicationOutcome> rows);

// Columns: one action column per player, then one payoff column per player.
void WritePayoffTableCsv(std::ostream& out, const MarketInstance& market,
                         const PayoffTable& table);

nlohmann::ordered_json DominanceSummary(const MarketInstance& market,
                                        const PayoffTable& table,
                                        const DominanceReport& report);

// Columns: k,cum_prob,stderr,n_k
void WriteCurveCsv(std::ostream& out, const MatchCurve& curve);

// Columns: round,mean_q,mean_interviews
void WriteEscalationCsv(std::ostream& out,
                        std::span<const EscalationRound> rounds);

struct RunManifest {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> input_digests;  // path, sha256
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::optional<uint64_t> seed;
  std::string tool_version;
  double wall_seconds = 0;
};

std::string Sha256Hex(std::string_view data);

nlohmann::ordered_json ToJson(const RunManifest& manifest);

}  // namespace resmatch

#endif  // RESMATCH_REPORT_H_
