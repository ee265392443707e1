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
#include <deque>
#include <set>
#include <string>
#include <utility>

namespace resmatch {

std::vector<PairingStep> PairingStepsThrough(int max_diagonal) {
  std::vector<PairingStep> steps;
  for (auto it = PairingOrder().begin(); it.diagonal() <= max_diagonal; ++it) {
    steps.push_back(*it);
  }
  return steps;
}

namespace {

void Emit(const TraceSink& trace, const TraceEvent& event) {
  if (trace) trace(event);
}

Matching ApplicantsPropose(const MarketInstance& market,
                           const TraceSink& trace) {
  const int n = market.applicant_count();
  const int np = market.program_count();
  std::vector<int> next(n, 0);
  // Held offers per program ordered by the program's rank of the applicant;
  // the back element is the first to be displaced.
  std::vector<std::set<std::pair<int, int32_t>>> held(np);
  std::deque<int32_t> free;
  for (int32_t a = 0; a < n; ++a) free.push_back(a);

  auto event = [&](TraceEvent::Kind kind, ApplicantId a, ProgramId p) {
    TraceEvent e;
    e.kind = kind;
    e.proposer_side = ProposingSide::kApplicants;
    e.applicant = a;
    e.program = p;
    return e;
  };

  while (!free.empty()) {
    const ApplicantId a(free.front());
    free.pop_front();
    const PreferenceList<ProgramId>& list = market.applicant_prefs(a);
    while (next[a.value()] < list.size()) {
      const ProgramId p = list.AtRank(++next[a.value()]);
      Emit(trace, event(TraceEvent::Kind::kPropose, a, p));
      const std::optional<int> rank = market.ProgramRank(p, a);
      if (!rank) {
        Emit(trace, event(TraceEvent::Kind::kReject, a, p));
        continue;
      }
      auto& seats = held[p.value()];
      if (static_cast<int>(seats.size()) < market.capacity(p)) {
        seats.emplace(*rank, a.value());
        Emit(trace, event(TraceEvent::Kind::kHold, a, p));
        break;
      }
      const auto worst = std::prev(seats.end());
      if (*rank < worst->first) {
        const ApplicantId dropped(worst->second);
        seats.erase(worst);
        seats.emplace(*rank, a.value());
        TraceEvent e = event(TraceEvent::Kind::kDisplace, a, p);
        e.displaced = dropped;
        Emit(trace, e);
        free.push_back(dropped.value());
        break;
      }
      Emit(trace, event(TraceEvent::Kind::kReject, a, p));
    }
  }

  std::vector<std::optional<ProgramId>> assignment(n);
  for (int32_t p = 0; p < np; ++p) {
    for (const auto& [rank, a] : held[p]) assignment[a] = ProgramId(p);
  }
  return Matching(market, std::move(assignment));
}

Matching ProgramsPropose(const MarketInstance& market,
                         const TraceSink& trace) {
  const int n = market.applicant_count();
  const int np = market.program_count();
  std::vector<int> next(np, 0);
  std::vector<int> used(np, 0);
  std::vector<std::optional<ProgramId>> holding(n);
  std::vector<bool> queued(np, true);
  std::deque<int32_t> queue;
  for (int32_t p = 0; p < np; ++p) queue.push_back(p);

  auto event = [&](TraceEvent::Kind kind, ApplicantId a, ProgramId p) {
    TraceEvent e;
    e.kind = kind;
    e.proposer_side = ProposingSide::kPrograms;
    e.applicant = a;
    e.program = p;
    return e;
  };

  while (!queue.empty()) {
    const ProgramId p(queue.front());
    queue.pop_front();
    queued[p.value()] = false;
    const PreferenceList<ApplicantId>& list = FlatOrder(market.program_prefs(p));
    while (used[p.value()] < market.capacity(p) &&
           next[p.value()] < list.size()) {
      const ApplicantId a = list.AtRank(++next[p.value()]);
      Emit(trace, event(TraceEvent::Kind::kPropose, a, p));
      const std::optional<int> rank = market.ApplicantRank(a, p);
      if (!rank) {
        Emit(trace, event(TraceEvent::Kind::kReject, a, p));
        continue;
      }
      std::optional<ProgramId>& current = holding[a.value()];
      if (!current) {
        current = p;
        ++used[p.value()];
        Emit(trace, event(TraceEvent::Kind::kHold, a, p));
        continue;
      }
      if (*rank < *market.ApplicantRank(a, *current)) {
        const ProgramId dropped = *current;
        current = p;
        ++used[p.value()];
        --used[dropped.value()];
        TraceEvent e = event(TraceEvent::Kind::kDisplace, a, p);
        e.displaced_program = dropped;
        Emit(trace, e);
        if (!queued[dropped.value()]) {
          queued[dropped.value()] = true;
          queue.push_back(dropped.value());
        }
        continue;
      }
      Emit(trace, event(TraceEvent::Kind::kReject, a, p));
    }
  }
  return Matching(market, std::move(holding));
}

}  // namespace

Matching GaleShapley(const MarketInstance& market, ProposingSide side,
                     const TraceSink& trace) {
  if (market.HasTieredPrograms()) {
    ThrowValidation(
        "gale_shapley requires strict program lists; the market has tiered "
        "lists (flatten them first)");
  }
  return side == ProposingSide::kApplicants ? ApplicantsPropose(market, trace)
                                            : ProgramsPropose(market, trace);
}

Matching BostonPool(const MarketInstance& market, const TraceSink& trace) {
  for (int p = 0; p < market.program_count(); ++p) {
    const ProgramPreferences& prefs = market.program_prefs(ProgramId(p));
    if (!IsTiered(prefs) && !FlatOrder(prefs).empty()) {
      ThrowValidation("boston_pool requires tiered program lists; program '" +
                      market.program_name(ProgramId(p)) +
                      "' has a strict list");
    }
  }
  int last_diagonal = 0;
  for (int a = 0; a < market.applicant_count(); ++a) {
    last_diagonal =
        std::max(last_diagonal, market.applicant_prefs(ApplicantId(a)).size());
  }
  for (int p = 0; p < market.program_count(); ++p) {
    if (const auto* tiers = std::get_if<TieredPreferenceList>(
            &market.program_prefs(ProgramId(p)))) {
      last_diagonal = std::max(last_diagonal, tiers->tier_count());
    }
  }

  std::vector<std::optional<ProgramId>> assignment(market.applicant_count());
  std::vector<int> used(market.program_count(), 0);
  for (auto it = PairingOrder().begin(); it.diagonal() <= last_diagonal;
       ++it) {
    const PairingStep step = *it;
    if (trace) {
      TraceEvent e;
      e.kind = TraceEvent::Kind::kStep;
      e.step = step;
      trace(e);
    }
    for (int32_t pi = 0; pi < market.program_count(); ++pi) {
      const ProgramId p(pi);
      const auto* tiers =
          std::get_if<TieredPreferenceList>(&market.program_prefs(p));
      if (tiers == nullptr || step.tier > tiers->tier_count()) continue;
      for (const ApplicantId a : tiers->tier(step.tier)) {
        if (used[pi] >= market.capacity(p)) break;
        if (assignment[a.value()]) continue;
        if (market.ApplicantRank(a, p) != step.rank) continue;
        assignment[a.value()] = p;
        ++used[pi];
        if (trace) {
          TraceEvent e;
          e.kind = TraceEvent::Kind::kAssign;
          e.applicant = a;
          e.program = p;
          e.step = step;
          trace(e);
        }
      }
    }
  }
  return Matching(market, std::move(assignment));
}

MarketInstance FlattenTiers(const MarketInstance& market) {
  std::vector<PreferenceList<ProgramId>> applicant_prefs;
  for (int a = 0; a < market.applicant_count(); ++a) {
    applicant_prefs.push_back(market.applicant_prefs(ApplicantId(a)));
  }
  std::vector<ProgramPreferences> program_prefs;
  for (int p = 0; p < market.program_count(); ++p) {
    program_prefs.emplace_back(FlatOrder(market.program_prefs(ProgramId(p))));
  }
  const auto a_names = market.applicant_names();
  const auto p_names = market.program_names();
  const auto caps = market.capacities();
  return MarketInstance({a_names.begin(), a_names.end()},
                        {p_names.begin(), p_names.end()},
                        {caps.begin(), caps.end()}, std::move(applicant_prefs),
                        std::move(program_prefs));
}

namespace {

// Definition-level check: some mutually ranked (a, p) where a prefers p to
// its assignment and p has a free seat or prefers a to one of its holders.
bool HasBlockingPair(const MarketInstance& market,
                     const std::vector<int32_t>& choice,
                     const std::vector<std::vector<int32_t>>& holders) {
  for (int32_t a = 0; a < market.applicant_count(); ++a) {
    const auto& list = market.applicant_prefs(ApplicantId(a));
    for (const ProgramId p : list.order()) {
      if (choice[a] == p.value()) break;  // later entries are worse
      const std::optional<int> rho = market.ProgramRank(p, ApplicantId(a));
      if (!rho) continue;
      const auto& seats = holders[p.value()];
      if (static_cast<int>(seats.size()) < market.capacity(p)) return true;
      for (const int32_t b : seats) {
        if (*rho < *market.ProgramRank(p, ApplicantId(b))) return true;
      }
    }
  }
  return false;
}

}  // namespace

std::vector<Matching> EnumerateStableMatchings(
    const MarketInstance& market, const EnumerationOptions& options) {
  const int n = market.applicant_count();
  std::vector<std::vector<int32_t>> candidates(n);
  int64_t space = 1;
  for (int32_t a = 0; a < n; ++a) {
    for (int32_t p = 0; p < market.program_count(); ++p) {
      if (market.MutuallyRanked(ApplicantId(a), ProgramId(p))) {
        candidates[a].push_back(p);
      }
    }
    candidates[a].push_back(-1);  // unmatched
    const int64_t options_here = static_cast<int64_t>(candidates[a].size());
    if (space > options.max_assignments / options_here) {
      ThrowGuardLimit("stable-matching enumeration needs more than " +
                      std::to_string(options.max_assignments) +
                      " candidate assignments");
    }
    space *= options_here;
  }

  std::vector<int32_t> choice(n, -1);
  std::vector<std::vector<int32_t>> holders(market.program_count());
  std::vector<Matching> stable;
  // Depth-first over applicants in id order, options in candidate order, so
  // survivors come out already sorted.
  std::function<void(int)> visit = [&](int a) {
    if (a == n) {
      if (HasBlockingPair(market, choice, holders)) return;
      std::vector<std::optional<ProgramId>> assignment(n);
      for (int i = 0; i < n; ++i) {
        if (choice[i] >= 0) assignment[i] = ProgramId(choice[i]);
      }
      stable.emplace_back(market, std::move(assignment));
      return;
    }
    for (const int32_t p : candidates[a]) {
      if (p >= 0) {
        if (static_cast<int>(holders[p].size()) >=
            market.capacity(ProgramId(p))) {
          continue;
        }
        holders[p].push_back(a);
      }
      choice[a] = p;
      visit(a + 1);
      choice[a] = -1;
      if (p >= 0) holders[p].pop_back();
    }
  };
  visit(0);
  return stable;
}

}  // namespace resmatch
