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

#include "resmatch/report.h"

#include <openssl/evp.h>

#include <cstdio>
#include <ostream>

namespace resmatch {

namespace {

std::string Fixed(double value, int digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, value);
  return buffer;
}

std::string Gain(const std::optional<int>& gain) {
  return gain ? std::to_string(*gain) : "inf";
}

}  // namespace

void WriteStabilityReport(std::ostream& out, const MarketInstance& market,
                          std::span<const BlockingPair> pairs) {
  for (const BlockingPair& pair : pairs) {
    out << "blocking pair: applicant=" << market.applicant_name(pair.applicant)
        << " program=" << market.program_name(pair.program)
        << " applicant_gain=" << Gain(pair.applicant_gain)
        << " program_gain=" << Gain(pair.program_gain) << '\n';
  }
  out << (pairs.empty() ? "STABLE, " : "UNSTABLE, ") << pairs.size()
      << " blocking pairs\n";
}

void WriteCostCsv(std::ostream& out,
                  std::span<const ApplicationOutcome> rows) {
  out << "q,application_cost_cents,expected_interviews,expected_payoff_cents,"
         "feasible\n";
  for (const ApplicationOutcome& row : rows) {
    out << row.applications << ',' << row.application_cost.cents() << ','
        << Fixed(row.expected_interviews, 6) << ','
        << Fixed(row.value_cents, 4) << ',' << (row.feasible ? 1 : 0) << '\n';
  }
}

void WritePayoffTableCsv(std::ostream& out, const MarketInstance& market,
                         const PayoffTable& table) {
  for (const PlayerActions& player : table.players) {
    out << "action:" << ParticipantName(market, player.player) << ',';
  }
  for (size_t i = 0; i < table.players.size(); ++i) {
    out << "payoff:" << ParticipantName(market, table.players[i].player)
        << (i + 1 < table.players.size() ? "," : "");
  }
  out << '\n';
  for (const PayoffCell& cell : table.cells) {
    for (size_t i = 0; i < cell.actions.size(); ++i) {
      out << table.players[i].actions[cell.actions[i]].label << ',';
    }
    for (size_t i = 0; i < cell.payoffs.size(); ++i) {
      out << Fixed(cell.payoffs[i], 6)
          << (i + 1 < cell.payoffs.size() ? "," : "");
    }
    out << '\n';
  }
}

nlohmann::ordered_json DominanceSummary(const MarketInstance& market,
                                        const PayoffTable& table,
                                        const DominanceReport& report) {
  nlohmann::ordered_json j;
  j["verdict"] = report.holds() ? "rank-all weakly dominant"
                                : "rank-all not dominant";
  j["holds"] = report.holds();
  j["action_space"] = report.action_space == ActionSpace::kAllSubsets
                          ? "all-subsets"
                          : "rank-all-or-none";
  j["players"] = nlohmann::ordered_json::array();
  for (size_t i = 0; i < report.players.size(); ++i) {
    j["players"].push_back(
        {{"player", ParticipantName(market, report.players[i])},
         {"rank_all_dominant", static_cast<bool>(report.rank_all_dominant[i])}});
  }
  j["profiles_checked"] = report.profiles_checked;
  j["counterexamples"] = nlohmann::ordered_json::array();
  for (const DominanceCounterexample& c : report.counterexamples) {
    nlohmann::ordered_json profile = nlohmann::ordered_json::object();
    for (size_t i = 0; i < c.profile.size(); ++i) {
      profile[ParticipantName(market, table.players[i].player)] =
          table.players[i].actions[c.profile[i]].label;
    }
    j["counterexamples"].push_back(
        {{"player", ParticipantName(market, c.player)},
         {"profile", profile},
         {"rank_all_payoff", c.rank_all_payoff},
         {"alternative_payoff", c.alternative_payoff}});
  }
  return j;
}

void WriteCurveCsv(std::ostream& out, const MatchCurve& curve) {
  out << "k,cum_prob,stderr,n_k\n";
  for (const MatchCurve::Point& point : curve.points) {
    out << point.k << ',' << Fixed(point.cum_prob, 10) << ','
        << Fixed(point.std_error, 10) << ',' << point.n_k << '\n';
  }
}

void WriteEscalationCsv(std::ostream& out,
                        std::span<const EscalationRound> rounds) {
  out << "round,mean_q,mean_interviews\n";
  for (const EscalationRound& row : rounds) {
    out << row.round << ',' << Fixed(row.mean_applications, 6) << ','
        << Fixed(row.mean_interviews, 6) << '\n';
  }
}

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xf];
  }
  return hex;
}

nlohmann::ordered_json ToJson(const RunManifest& manifest) {
  nlohmann::ordered_json j;
  j["subcommand"] = manifest.subcommand;
  j["inputs"] = nlohmann::ordered_json::array();
  for (const auto& [path, digest] : manifest.input_digests) {
    j["inputs"].push_back({{"path", path}, {"sha256", digest}});
  }
  j["config"] = manifest.config;
  if (manifest.seed) {
    j["seed"] = *manifest.seed;
  } else {
    j["seed"] = nullptr;
  }
  j["tool_version"] = manifest.tool_version;
  j["wall_seconds"] = manifest.wall_seconds;
  return j;
}

}  // namespace resmatch
