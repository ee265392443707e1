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

// Rank/not-rank payoff games on a market.
//
// Each participant earns, for every counterpart it ranks, a payoff that
// depends on its true rank of that counterpart and on whether the two ended
// up matched. Outcomes are resolved by applicant-proposing deferred
// acceptance on the market induced by everyone's submitted lists.

#ifndef RESMATCH_PAYOFF_H_
#define RESMATCH_PAYOFF_H_

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "resmatch/market.h"

namespace resmatch {

enum class MatchStatus { kUnmatched = 0, kMatched = 1 };

// A payoff as a function of (rank, match status). Ranks beyond a table use
// that table's tail value. Construction enforces non-increase in rank and
// matched >= unmatched >= 0.
class PayoffFunction {
 public:
  PayoffFunction() = default;
  PayoffFunction(std::vector<double> matched, double matched_tail,
                 std::vector<double> unmatched, double unmatched_tail);

  double operator()(int rank, MatchStatus status) const;

  const std::vector<double>& matched() const { return matched_; }
  const std::vector<double>& unmatched() const { return unmatched_; }
  double matched_tail() const { return matched_tail_; }
  double unmatched_tail() const { return unmatched_tail_; }

 private:
  std::vector<double> matched_;
  std::vector<double> unmatched_;
  double matched_tail_ = 0;
  double unmatched_tail_ = 0;
};

struct PayoffSpec {
  PayoffFunction applicant;
  PayoffFunction program;
};

using Participant = std::variant<ApplicantId, ProgramId>;

std::string ParticipantName(const MarketInstance& market, Participant who);
// Length of the participant's true list.
int ListSize(const MarketInstance& market, Participant who);

// What each participant submits: a subset of its true list, in true order
// (flattened for tiered programs).
struct StrategyProfile {
  std::vector<std::vector<ProgramId>> applicant_lists;
  std::vector<std::vector<ApplicantId>> program_lists;

  static StrategyProfile RankAll(const MarketInstance& market);
  static StrategyProfile RankNone(const MarketInstance& market);
};

// Throws kValidation unless every submitted list is an order-preserving
// subset of the owner's true list.
void ValidateProfile(const MarketInstance& market,
                     const StrategyProfile& profile);

struct Payoffs {
  std::vector<double> applicants;
  std::vector<double> programs;

  double of(Participant who) const;
  friend bool operator==(const Payoffs&, const Payoffs&) = default;
};

// The matching produced by applicant-proposing deferred acceptance on the
// submitted lists.
Matching ResolveProfile(const MarketInstance& market,
                        const StrategyProfile& profile);

// Pays every submitted entry f(true rank, M) (resp. g for programs), with
// M = 1 exactly for the matched partner(s). Submitting nothing pays 0.
Payoffs PayProfile(const MarketInstance& market, const StrategyProfile& profile,
                   const Matching& outcome, const PayoffSpec& spec);

Payoffs ResolveAndPay(const MarketInstance& market,
                      const StrategyProfile& profile, const PayoffSpec& spec);

// An action is the subset of the true list a player submits, given as
// 0-based positions into that list.
struct Action {
  std::vector<int> kept;
  std::string label;

  friend bool operator==(const Action&, const Action&) = default;
};

enum class ActionSpace {
  kAuto,          // all subsets when small enough, otherwise the two extremes
  kRankAllOrNone,
  kAllSubsets,
};

inline constexpr int kMaxExtremeActionPlayers = 12;
inline constexpr int kMaxSubsetActionPlayers = 3;
inline constexpr int kMaxSubsetActionListSize = 3;

struct PlayerActions {
  Participant player;
  std::vector<Action> actions;  // actions[0] is always rank-all
};

struct PayoffCell {
  std::vector<int> actions;     // one action index per table player
  std::vector<double> payoffs;  // one payoff per table player
};

// Players not in the table keep submitting their full true lists. Cells are
// in row-major order: the last player's action varies fastest.
struct PayoffTable {
  ActionSpace action_space = ActionSpace::kRankAllOrNone;
  std::vector<PlayerActions> players;
  std::vector<PayoffCell> cells;

  const PayoffCell& at(std::span<const int> actions) const;
};

// Resolves the concrete action space for a set of players; throws
// kGuardLimit when the game is too large for the requested space.
ActionSpace ChooseActionSpace(const MarketInstance& market,
                              std::span<const Participant> players,
                              ActionSpace requested);

// The outcome of every action profile, independent of any payoff spec.
struct ResolvedGame {
  ActionSpace action_space = ActionSpace::kRankAllOrNone;
  std::vector<PlayerActions> players;
  std::vector<std::vector<int>> profiles;  // row-major, as in PayoffTable
  std::vector<StrategyProfile> strategies;
  std::vector<Matching> outcomes;
};

ResolvedGame ResolveGame(const MarketInstance& market,
                         std::span<const Participant> players,
                         ActionSpace space = ActionSpace::kAuto);

PayoffTable PayGame(const MarketInstance& market, const ResolvedGame& game,
                    const PayoffSpec& spec);

PayoffTable BuildPayoffTable(const MarketInstance& market,
                             const PayoffSpec& spec,
                             std::span<const Participant> players,
                             ActionSpace space = ActionSpace::kAuto);

struct DominanceCounterexample {
  Participant player;
  std::vector<int> profile;  // action indices, player's entry = alternative
  double rank_all_payoff = 0;
  double alternative_payoff = 0;
};

struct DominanceReport {
  ActionSpace action_space = ActionSpace::kRankAllOrNone;
  std::vector<Participant> players;
  std::vector<bool> rank_all_dominant;  // per player
  int64_t profiles_checked = 0;
  std::vector<DominanceCounterexample> counterexamples;

  bool holds() const { return counterexamples.empty(); }
};

// Checks, for every player, that submitting its full list pays at least as
// much as every alternative action against every profile of the others.
DominanceReport CheckRankAllDominance(const MarketInstance& market,
                                      const PayoffSpec& spec,
                                      ActionSpace space = ActionSpace::kAuto);
DominanceReport CheckRankAllDominance(const MarketInstance& market,
                                      const PayoffSpec& spec,
                                      std::span<const Participant> players,
                                      ActionSpace space = ActionSpace::kAuto);

// Same check over an already built table.
DominanceReport CheckRankAllDominance(const PayoffTable& table);

// Every participant: applicants first, then programs.
std::vector<Participant> AllParticipants(const MarketInstance& market);

}  // namespace resmatch

#endif  // RESMATCH_PAYOFF_H_
