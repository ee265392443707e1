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

#include "resmatch/payoff.h"

#include <cmath>
#include <numeric>

#include "resmatch/engines.h"

namespace resmatch {

namespace {

void CheckTable(const std::vector<double>& values, double tail,
                const char* what) {
  for (const double v : values) {
    if (!std::isfinite(v)) ThrowValidation(std::string(what) + " is not finite");
  }
  if (!std::isfinite(tail)) {
    ThrowValidation(std::string(what) + " tail is not finite");
  }
  for (size_t i = 0; i < values.size(); ++i) {
    const double next = i + 1 < values.size() ? values[i + 1] : tail;
    if (next > values[i]) {
      ThrowValidation(std::string(what) + " increases from rank " +
                      std::to_string(i + 1) + " to rank " +
                      std::to_string(i + 2));
    }
  }
}

}  // namespace

PayoffFunction::PayoffFunction(std::vector<double> matched,
                               double matched_tail,
                               std::vector<double> unmatched,
                               double unmatched_tail)
    : matched_(std::move(matched)),
      unmatched_(std::move(unmatched)),
      matched_tail_(matched_tail),
      unmatched_tail_(unmatched_tail) {
  CheckTable(matched_, matched_tail_, "matched payoff");
  CheckTable(unmatched_, unmatched_tail_, "unmatched payoff");
  const int last = static_cast<int>(std::max(matched_.size(), unmatched_.size())) + 1;
  for (int r = 1; r <= last; ++r) {
    const double m = (*this)(r, MatchStatus::kMatched);
    const double u = (*this)(r, MatchStatus::kUnmatched);
    if (u < 0) {
      ThrowValidation("unmatched payoff at rank " + std::to_string(r) +
                      " is negative");
    }
    if (m < u) {
      ThrowValidation("matched payoff at rank " + std::to_string(r) +
                      " is below the unmatched payoff");
    }
  }
}

double PayoffFunction::operator()(int rank, MatchStatus status) const {
  const auto& table =
      status == MatchStatus::kMatched ? matched_ : unmatched_;
  const double tail =
      status == MatchStatus::kMatched ? matched_tail_ : unmatched_tail_;
  if (rank >= 1 && rank <= static_cast<int>(table.size())) {
    return table[rank - 1];
  }
  return tail;
}

std::string ParticipantName(const MarketInstance& market, Participant who) {
  if (const auto* a = std::get_if<ApplicantId>(&who)) {
    return market.applicant_name(*a);
  }
  return market.program_name(std::get<ProgramId>(who));
}

int ListSize(const MarketInstance& market, Participant who) {
  if (const auto* a = std::get_if<ApplicantId>(&who)) {
    return market.applicant_prefs(*a).size();
  }
  return FlatOrder(market.program_prefs(std::get<ProgramId>(who))).size();
}

std::vector<Participant> AllParticipants(const MarketInstance& market) {
  std::vector<Participant> all;
  for (int a = 0; a < market.applicant_count(); ++a) {
    all.emplace_back(ApplicantId(a));
  }
  for (int p = 0; p < market.program_count(); ++p) {
    all.emplace_back(ProgramId(p));
  }
  return all;
}

StrategyProfile StrategyProfile::RankAll(const MarketInstance& market) {
  StrategyProfile profile;
  for (int a = 0; a < market.applicant_count(); ++a) {
    const auto order = market.applicant_prefs(ApplicantId(a)).order();
    profile.applicant_lists.emplace_back(order.begin(), order.end());
  }
  for (int p = 0; p < market.program_count(); ++p) {
    const auto order = FlatOrder(market.program_prefs(ProgramId(p))).order();
    profile.program_lists.emplace_back(order.begin(), order.end());
  }
  return profile;
}

StrategyProfile StrategyProfile::RankNone(const MarketInstance& market) {
  StrategyProfile profile;
  profile.applicant_lists.resize(market.applicant_count());
  profile.program_lists.resize(market.program_count());
  return profile;
}

namespace {

template <typename Id>
void CheckSubsequence(const std::vector<Id>& submitted,
                      const PreferenceList<Id>& truth,
                      const std::string& owner) {
  int last_rank = 0;
  for (const Id id : submitted) {
    const std::optional<int> rank = truth.RankOf(id);
    if (!rank) {
      ThrowValidation("profile for '" + owner +
                      "' submits a counterpart outside its true list");
    }
    if (*rank <= last_rank) {
      ThrowValidation("profile for '" + owner +
                      "' reorders or repeats its true list");
    }
    last_rank = *rank;
  }
}

}  // namespace

void ValidateProfile(const MarketInstance& market,
                     const StrategyProfile& profile) {
  if (static_cast<int>(profile.applicant_lists.size()) !=
          market.applicant_count() ||
      static_cast<int>(profile.program_lists.size()) !=
          market.program_count()) {
    ThrowValidation("strategy profile does not cover every participant");
  }
  for (int a = 0; a < market.applicant_count(); ++a) {
    CheckSubsequence(profile.applicant_lists[a],
                     market.applicant_prefs(ApplicantId(a)),
                     market.applicant_name(ApplicantId(a)));
  }
  for (int p = 0; p < market.program_count(); ++p) {
    CheckSubsequence(profile.program_lists[p],
                     FlatOrder(market.program_prefs(ProgramId(p))),
                     market.program_name(ProgramId(p)));
  }
}

double Payoffs::of(Participant who) const {
  if (const auto* a = std::get_if<ApplicantId>(&who)) {
    return applicants.at(a->value());
  }
  return programs.at(std::get<ProgramId>(who).value());
}

Matching ResolveProfile(const MarketInstance& market,
                        const StrategyProfile& profile) {
  ValidateProfile(market, profile);
  std::vector<PreferenceList<ProgramId>> applicant_prefs;
  for (const auto& list : profile.applicant_lists) {
    applicant_prefs.emplace_back(list, market.program_count());
  }
  std::vector<ProgramPreferences> program_prefs;
  for (const auto& list : profile.program_lists) {
    program_prefs.emplace_back(
        PreferenceList<ApplicantId>(list, market.applicant_count()));
  }
  const auto a_names = market.applicant_names();
  const auto p_names = market.program_names();
  const auto caps = market.capacities();
  const MarketInstance submitted({a_names.begin(), a_names.end()},
                                 {p_names.begin(), p_names.end()},
                                 {caps.begin(), caps.end()},
                                 std::move(applicant_prefs),
                                 std::move(program_prefs));
  return Matching(market, GaleShapley(submitted, ProposingSide::kApplicants)
                              .assignment());
}

Payoffs PayProfile(const MarketInstance& market, const StrategyProfile& profile,
                   const Matching& outcome, const PayoffSpec& spec) {
  Payoffs pay;
  pay.applicants.assign(market.applicant_count(), 0.0);
  pay.programs.assign(market.program_count(), 0.0);
  for (int32_t a = 0; a < market.applicant_count(); ++a) {
    const std::optional<ProgramId> partner = outcome.ProgramOf(ApplicantId(a));
    for (const ProgramId p : profile.applicant_lists[a]) {
      const MatchStatus status =
          partner == p ? MatchStatus::kMatched : MatchStatus::kUnmatched;
      pay.applicants[a] +=
          spec.applicant(*market.ApplicantRank(ApplicantId(a), p), status);
    }
  }
  for (int32_t p = 0; p < market.program_count(); ++p) {
    for (const ApplicantId a : profile.program_lists[p]) {
      const MatchStatus status = outcome.ProgramOf(a) == ProgramId(p)
                                     ? MatchStatus::kMatched
                                     : MatchStatus::kUnmatched;
      pay.programs[p] +=
          spec.program(*market.ProgramRank(ProgramId(p), a), status);
    }
  }
  return pay;
}

Payoffs ResolveAndPay(const MarketInstance& market,
                      const StrategyProfile& profile, const PayoffSpec& spec) {
  return PayProfile(market, profile, ResolveProfile(market, profile), spec);
}

ActionSpace ChooseActionSpace(const MarketInstance& market,
                              std::span<const Participant> players,
                              ActionSpace requested) {
  const int count = static_cast<int>(players.size());
  bool small_lists = true;
  for (const Participant who : players) {
    if (ListSize(market, who) > kMaxSubsetActionListSize) small_lists = false;
  }
  const bool subsets_fit = count <= kMaxSubsetActionPlayers && small_lists;
  switch (requested) {
    case ActionSpace::kAllSubsets:
      if (!subsets_fit) {
        ThrowGuardLimit("all-subset action games are limited to " +
                        std::to_string(kMaxSubsetActionPlayers) +
                        " players with at most " +
                        std::to_string(kMaxSubsetActionListSize) +
                        " counterparts each");
      }
      return ActionSpace::kAllSubsets;
    case ActionSpace::kAuto:
      if (subsets_fit) return ActionSpace::kAllSubsets;
      [[fallthrough]];
    case ActionSpace::kRankAllOrNone:
      if (count > kMaxExtremeActionPlayers) {
        ThrowGuardLimit("rank-all/rank-none games are limited to " +
                        std::to_string(kMaxExtremeActionPlayers) +
                        " players, got " + std::to_string(count));
      }
      return ActionSpace::kRankAllOrNone;
  }
  return ActionSpace::kRankAllOrNone;
}

namespace {

template <typename Id>
std::vector<Id> TrueList(const MarketInstance& market, Participant who) {
  if constexpr (std::is_same_v<Id, ProgramId>) {
    const auto order = market.applicant_prefs(std::get<ApplicantId>(who)).order();
    return {order.begin(), order.end()};
  } else {
    const auto order =
        FlatOrder(market.program_prefs(std::get<ProgramId>(who))).order();
    return {order.begin(), order.end()};
  }
}

std::string CounterpartName(const MarketInstance& market, Participant who,
                            int position) {
  if (const auto* a = std::get_if<ApplicantId>(&who)) {
    return market.program_name(market.applicant_prefs(*a).AtRank(position + 1));
  }
  return market.applicant_name(
      FlatOrder(market.program_prefs(std::get<ProgramId>(who)))
          .AtRank(position + 1));
}

std::vector<Action> ActionsFor(const MarketInstance& market, Participant who,
                               ActionSpace space) {
  const int size = ListSize(market, who);
  std::vector<uint32_t> masks;
  const uint32_t full = size >= 32 ? ~0u : (1u << size) - 1;
  if (space == ActionSpace::kAllSubsets) {
    for (int64_t mask = full; mask >= 0; --mask) {
      masks.push_back(static_cast<uint32_t>(mask));
    }
  } else {
    masks.push_back(full);
    if (size > 0) masks.push_back(0);
  }
  std::vector<Action> actions;
  for (const uint32_t mask : masks) {
    Action action;
    if (space == ActionSpace::kRankAllOrNone && mask == full) {
      action.kept.resize(size);
      std::iota(action.kept.begin(), action.kept.end(), 0);
    } else {
      for (int i = 0; i < size; ++i) {
        if (mask & (1u << i)) action.kept.push_back(i);
      }
    }
    if (static_cast<int>(action.kept.size()) == size) {
      action.label = "rank all";
    } else if (action.kept.empty()) {
      action.label = "not rank";
    } else {
      action.label = "rank ";
      for (size_t i = 0; i < action.kept.size(); ++i) {
        if (i > 0) action.label += ">";
        action.label += CounterpartName(market, who, action.kept[i]);
      }
    }
    actions.push_back(std::move(action));
  }
  return actions;
}

void ApplyAction(const MarketInstance& market, Participant who,
                 const Action& action, StrategyProfile& profile) {
  if (const auto* a = std::get_if<ApplicantId>(&who)) {
    const auto truth = TrueList<ProgramId>(market, who);
    auto& list = profile.applicant_lists[a->value()];
    list.clear();
    for (const int i : action.kept) list.push_back(truth[i]);
  } else {
    const auto truth = TrueList<ApplicantId>(market, who);
    auto& list = profile.program_lists[std::get<ProgramId>(who).value()];
    list.clear();
    for (const int i : action.kept) list.push_back(truth[i]);
  }
}

}  // namespace

ResolvedGame ResolveGame(const MarketInstance& market,
                         std::span<const Participant> players,
                         ActionSpace space) {
  ResolvedGame game;
  game.action_space = ChooseActionSpace(market, players, space);
  for (const Participant who : players) {
    game.players.push_back({who, ActionsFor(market, who, game.action_space)});
  }
  if (players.empty()) return game;

  std::vector<int> counter(players.size(), 0);
  const StrategyProfile base = StrategyProfile::RankAll(market);
  while (true) {
    StrategyProfile profile = base;
    for (size_t i = 0; i < players.size(); ++i) {
      ApplyAction(market, players[i], game.players[i].actions[counter[i]],
                  profile);
    }
    game.outcomes.push_back(ResolveProfile(market, profile));
    game.strategies.push_back(std::move(profile));
    game.profiles.push_back(counter);
    int i = static_cast<int>(players.size()) - 1;
    for (; i >= 0; --i) {
      if (++counter[i] < static_cast<int>(game.players[i].actions.size())) {
        break;
      }
      counter[i] = 0;
    }
    if (i < 0) break;
  }
  return game;
}

PayoffTable PayGame(const MarketInstance& market, const ResolvedGame& game,
                    const PayoffSpec& spec) {
  PayoffTable table;
  table.action_space = game.action_space;
  table.players = game.players;
  for (size_t c = 0; c < game.profiles.size(); ++c) {
    const Payoffs pay =
        PayProfile(market, game.strategies[c], game.outcomes[c], spec);
    PayoffCell cell;
    cell.actions = game.profiles[c];
    for (const PlayerActions& player : game.players) {
      cell.payoffs.push_back(pay.of(player.player));
    }
    table.cells.push_back(std::move(cell));
  }
  return table;
}

PayoffTable BuildPayoffTable(const MarketInstance& market,
                             const PayoffSpec& spec,
                             std::span<const Participant> players,
                             ActionSpace space) {
  return PayGame(market, ResolveGame(market, players, space), spec);
}

const PayoffCell& PayoffTable::at(std::span<const int> actions) const {
  if (actions.size() != players.size()) {
    ThrowValidation("payoff table lookup needs one action per player");
  }
  size_t index = 0;
  for (size_t i = 0; i < players.size(); ++i) {
    const int count = static_cast<int>(players[i].actions.size());
    if (actions[i] < 0 || actions[i] >= count) {
      ThrowValidation("payoff table action index out of range");
    }
    index = index * count + actions[i];
  }
  return cells.at(index);
}

DominanceReport CheckRankAllDominance(const PayoffTable& table) {
  DominanceReport report;
  report.action_space = table.action_space;
  const size_t count = table.players.size();
  for (const PlayerActions& player : table.players) {
    report.players.push_back(player.player);
  }
  report.rank_all_dominant.assign(count, true);
  for (size_t i = 0; i < count; ++i) {
    for (const PayoffCell& cell : table.cells) {
      if (cell.actions[i] == 0) continue;
      std::vector<int> reference = cell.actions;
      reference[i] = 0;
      const double rank_all = table.at(reference).payoffs[i];
      ++report.profiles_checked;
      if (cell.payoffs[i] > rank_all) {
        report.rank_all_dominant[i] = false;
        report.counterexamples.push_back(
            {table.players[i].player, cell.actions, rank_all,
             cell.payoffs[i]});
      }
    }
  }
  return report;
}

DominanceReport CheckRankAllDominance(const MarketInstance& market,
                                      const PayoffSpec& spec,
                                      std::span<const Participant> players,
                                      ActionSpace space) {
  return CheckRankAllDominance(BuildPayoffTable(market, spec, players, space));
}

DominanceReport CheckRankAllDominance(const MarketInstance& market,
                                      const PayoffSpec& spec,
                                      ActionSpace space) {
  const std::vector<Participant> players = AllParticipants(market);
  return CheckRankAllDominance(market, spec, players, space);
}

}  // namespace resmatch
