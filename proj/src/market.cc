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

#include "resmatch/market.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace resmatch {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse:
      return "parse error";
    case ErrorKind::kValidation:
      return "validation error";
    case ErrorKind::kGuardLimit:
      return "guard limit exceeded";
    case ErrorKind::kIo:
      return "i/o error";
    case ErrorKind::kInternal:
      return "internal error";
  }
  return "error";
}

TieredPreferenceList::TieredPreferenceList(
    std::vector<std::vector<ApplicantId>> tiers, int universe_size) {
  std::vector<ApplicantId> flat;
  for (size_t t = 0; t < tiers.size(); ++t) {
    if (tiers[t].empty()) {
      ThrowValidation("tier " + std::to_string(t + 1) + " is empty");
    }
    flat.insert(flat.end(), tiers[t].begin(), tiers[t].end());
    tier_ends_.push_back(static_cast<int>(flat.size()));
  }
  flat_ = PreferenceList<ApplicantId>(std::move(flat), universe_size);
}

std::span<const ApplicantId> TieredPreferenceList::tier(int t) const {
  if (t < 1 || t > tier_count()) return {};
  const int begin = t == 1 ? 0 : tier_ends_[t - 2];
  const int end = tier_ends_[t - 1];
  return flat_.order().subspan(begin, end - begin);
}

std::optional<TierPosition> TieredPreferenceList::PositionOf(
    ApplicantId id) const {
  const std::optional<int> rank = flat_.RankOf(id);
  if (!rank) return std::nullopt;
  const int offset = *rank - 1;
  const auto it =
      std::upper_bound(tier_ends_.begin(), tier_ends_.end(), offset);
  const int t = static_cast<int>(it - tier_ends_.begin());
  const int begin = t == 0 ? 0 : tier_ends_[t - 1];
  return TierPosition{t + 1, offset - begin + 1};
}

const PreferenceList<ApplicantId>& FlatOrder(const ProgramPreferences& prefs) {
  if (const auto* tiered = std::get_if<TieredPreferenceList>(&prefs)) {
    return tiered->flattened();
  }
  return std::get<PreferenceList<ApplicantId>>(prefs);
}

namespace {

void CheckUniqueNames(const std::vector<std::string>& names,
                      const char* side) {
  std::set<std::string_view> seen;
  for (const std::string& name : names) {
    if (name.empty()) {
      ThrowValidation(std::string("empty ") + side + " id");
    }
    if (!seen.insert(name).second) {
      ThrowValidation(std::string("duplicate ") + side + " id '" + name + "'");
    }
  }
}

template <typename Names>
std::optional<int32_t> FindName(const Names& names, std::string_view name) {
  const auto it = std::lower_bound(names.begin(), names.end(), name);
  if (it != names.end() && *it == name) {
    return static_cast<int32_t>(it - names.begin());
  }
  // Names are sorted when built through ValidateMarket; fall back to a scan
  // for hand-built instances.
  const auto lin = std::find(names.begin(), names.end(), name);
  if (lin == names.end()) return std::nullopt;
  return static_cast<int32_t>(lin - names.begin());
}

}  // namespace

MarketInstance::MarketInstance(
    std::vector<std::string> applicant_names,
    std::vector<std::string> program_names, std::vector<int> capacities,
    std::vector<PreferenceList<ProgramId>> applicant_prefs,
    std::vector<ProgramPreferences> program_prefs)
    : applicant_names_(std::move(applicant_names)),
      program_names_(std::move(program_names)),
      capacities_(std::move(capacities)),
      applicant_prefs_(std::move(applicant_prefs)),
      program_prefs_(std::move(program_prefs)) {
  CheckUniqueNames(applicant_names_, "applicant");
  CheckUniqueNames(program_names_, "program");
  const int n = applicant_count();
  const int p = program_count();
  if (static_cast<int>(capacities_.size()) != p ||
      static_cast<int>(program_prefs_.size()) != p) {
    ThrowValidation("program capacity/preference count does not match " +
                    std::to_string(p) + " programs");
  }
  if (static_cast<int>(applicant_prefs_.size()) != n) {
    ThrowValidation("applicant preference count does not match " +
                    std::to_string(n) + " applicants");
  }
  for (int i = 0; i < p; ++i) {
    if (capacities_[i] <= 0) {
      ThrowValidation("program '" + program_names_[i] +
                      "' has non-positive capacity " +
                      std::to_string(capacities_[i]));
    }
    if (FlatOrder(program_prefs_[i]).universe_size() != n) {
      ThrowValidation("program '" + program_names_[i] +
                      "' list built over the wrong applicant universe");
    }
    // An empty list has no tiers to speak of; keep one representation.
    if (IsTiered(program_prefs_[i]) && FlatOrder(program_prefs_[i]).empty()) {
      program_prefs_[i] = PreferenceList<ApplicantId>({}, n);
    }
  }
  for (int i = 0; i < n; ++i) {
    if (applicant_prefs_[i].universe_size() != p) {
      ThrowValidation("applicant '" + applicant_names_[i] +
                      "' list built over the wrong program universe");
    }
  }
}

int64_t MarketInstance::total_seats() const {
  return std::accumulate(capacities_.begin(), capacities_.end(), int64_t{0});
}

std::optional<ApplicantId> MarketInstance::FindApplicant(
    std::string_view name) const {
  if (auto i = FindName(applicant_names_, name)) return ApplicantId(*i);
  return std::nullopt;
}

std::optional<ProgramId> MarketInstance::FindProgram(
    std::string_view name) const {
  if (auto i = FindName(program_names_, name)) return ProgramId(*i);
  return std::nullopt;
}

bool MarketInstance::HasTieredPrograms() const {
  return std::any_of(program_prefs_.begin(), program_prefs_.end(), IsTiered);
}

bool MarketInstance::HasStrictPrograms() const {
  return std::any_of(program_prefs_.begin(), program_prefs_.end(),
                     [](const ProgramPreferences& prefs) {
                       return !IsTiered(prefs) && !FlatOrder(prefs).empty();
                     });
}

Matching::Matching(const MarketInstance& market,
                   std::vector<std::optional<ProgramId>> assignment)
    : assignment_(std::move(assignment)),
      assigned_(market.program_count()) {
  if (static_cast<int>(assignment_.size()) != market.applicant_count()) {
    ThrowValidation("matching covers " + std::to_string(assignment_.size()) +
                    " applicants, market has " +
                    std::to_string(market.applicant_count()));
  }
  for (int a = 0; a < static_cast<int>(assignment_.size()); ++a) {
    const std::optional<ProgramId>& p = assignment_[a];
    if (!p) continue;
    if (p->value() < 0 || p->value() >= market.program_count()) {
      ThrowValidation("matching assigns applicant '" +
                      market.applicant_name(ApplicantId(a)) +
                      "' to unknown program index " +
                      std::to_string(p->value()));
    }
    assigned_[p->value()].push_back(ApplicantId(a));
  }
  for (int p = 0; p < market.program_count(); ++p) {
    if (static_cast<int>(assigned_[p].size()) > market.capacity(ProgramId(p))) {
      ThrowValidation("program '" + market.program_name(ProgramId(p)) +
                      "' assigned " + std::to_string(assigned_[p].size()) +
                      " applicants over capacity " +
                      std::to_string(market.capacity(ProgramId(p))));
    }
  }
}

Matching Matching::Empty(const MarketInstance& market) {
  return Matching(market, std::vector<std::optional<ProgramId>>(
                              market.applicant_count()));
}

int Matching::matched_count() const {
  return static_cast<int>(
      std::count_if(assignment_.begin(), assignment_.end(),
                    [](const auto& p) { return p.has_value(); }));
}

namespace {

// Entries of one owner's list, checked for duplicates and contiguity.
template <typename Id>
std::vector<Id> OrderedList(std::vector<const RawPreferenceEntry*> entries,
                            const std::string& owner_desc,
                            const std::map<std::string, int32_t>& universe,
                            const char* counterpart_side) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const RawPreferenceEntry* a, const RawPreferenceEntry* b) {
                     return a->rank_or_tier < b->rank_or_tier;
                   });
  std::vector<Id> order;
  std::set<std::string> seen;
  for (size_t i = 0; i < entries.size(); ++i) {
    const RawPreferenceEntry& e = *entries[i];
    const int expected = static_cast<int>(i) + 1;
    if (e.rank_or_tier < 1) {
      ThrowValidation(e.location + ": " + owner_desc + " has invalid rank " +
                      std::to_string(e.rank_or_tier));
    }
    if (e.rank_or_tier != expected) {
      if (e.rank_or_tier == expected - 1) {
        ThrowValidation(e.location + ": " + owner_desc + " uses rank " +
                        std::to_string(e.rank_or_tier) + " twice");
      }
      ThrowValidation(e.location + ": " + owner_desc + " has a rank gap: " +
                      "expected rank " + std::to_string(expected) +
                      ", found " + std::to_string(e.rank_or_tier));
    }
    const auto it = universe.find(e.counterpart);
    if (it == universe.end()) {
      ThrowValidation(e.location + ": " + owner_desc + " ranks unknown " +
                      counterpart_side + " '" + e.counterpart + "'");
    }
    if (!seen.insert(e.counterpart).second) {
      ThrowValidation(e.location + ": " + owner_desc + " lists " +
                      counterpart_side + " '" + e.counterpart + "' twice");
    }
    order.push_back(Id(it->second));
  }
  return order;
}

}  // namespace

MarketInstance ValidateMarket(const RawMarket& raw) {
  std::set<std::string> applicant_set(raw.applicants.begin(),
                                      raw.applicants.end());
  for (const RawPreferenceEntry& e : raw.applicant_entries) {
    applicant_set.insert(e.owner);
  }
  std::map<std::string, const RawProgram*> program_map;
  for (const RawProgram& p : raw.programs) {
    if (p.id.empty()) ThrowValidation(p.location + ": empty program id");
    if (!program_map.emplace(p.id, &p).second) {
      ThrowValidation(p.location + ": duplicate program id '" + p.id + "'");
    }
    if (p.capacity <= 0) {
      ThrowValidation(p.location + ": program '" + p.id +
                      "' has non-positive capacity " +
                      std::to_string(p.capacity));
    }
    if (p.capacity > 1'000'000'000) {
      ThrowValidation(p.location + ": program '" + p.id +
                      "' capacity out of range");
    }
  }

  std::map<std::string, int32_t> applicant_index;
  std::vector<std::string> applicant_names;
  for (const std::string& name : applicant_set) {
    applicant_index.emplace(name, static_cast<int32_t>(applicant_names.size()));
    applicant_names.push_back(name);
  }
  std::map<std::string, int32_t> program_index;
  std::vector<std::string> program_names;
  std::vector<int> capacities;
  for (const auto& [name, p] : program_map) {
    program_index.emplace(name, static_cast<int32_t>(program_names.size()));
    program_names.push_back(name);
    capacities.push_back(static_cast<int>(p->capacity));
  }
  const int n = static_cast<int>(applicant_names.size());
  const int np = static_cast<int>(program_names.size());

  std::vector<std::vector<const RawPreferenceEntry*>> by_applicant(n);
  for (const RawPreferenceEntry& e : raw.applicant_entries) {
    if (e.within_tier) {
      ThrowValidation(e.location + ": applicant '" + e.owner +
                      "' uses a tiered list; tiers are program-side only");
    }
    by_applicant[applicant_index.at(e.owner)].push_back(&e);
  }
  std::vector<std::vector<const RawPreferenceEntry*>> by_program(np);
  for (const RawPreferenceEntry& e : raw.program_entries) {
    const auto it = program_index.find(e.owner);
    if (it == program_index.end()) {
      ThrowValidation(e.location + ": program '" + e.owner +
                      "' has no capacity declaration");
    }
    by_program[it->second].push_back(&e);
  }

  std::vector<PreferenceList<ProgramId>> applicant_prefs;
  applicant_prefs.reserve(n);
  for (int a = 0; a < n; ++a) {
    applicant_prefs.emplace_back(
        OrderedList<ProgramId>(by_applicant[a],
                               "applicant '" + applicant_names[a] + "'",
                               program_index, "program"),
        np);
  }

  std::vector<ProgramPreferences> program_prefs;
  program_prefs.reserve(np);
  for (int p = 0; p < np; ++p) {
    const auto& entries = by_program[p];
    const std::string desc = "program '" + program_names[p] + "'";
    const bool tiered =
        !entries.empty() && entries.front()->within_tier.has_value();
    for (const RawPreferenceEntry* e : entries) {
      if (e->within_tier.has_value() != tiered) {
        ThrowValidation(e->location + ": " + desc +
                        " mixes strict and tiered entries");
      }
    }
    if (!tiered) {
      program_prefs.emplace_back(PreferenceList<ApplicantId>(
          OrderedList<ApplicantId>(entries, desc, applicant_index,
                                   "applicant"),
          n));
      continue;
    }
    std::map<int, std::vector<const RawPreferenceEntry*>> tiers;
    for (const RawPreferenceEntry* e : entries) {
      if (e->rank_or_tier < 1) {
        ThrowValidation(e->location + ": " + desc + " has invalid tier " +
                        std::to_string(e->rank_or_tier));
      }
      tiers[e->rank_or_tier].push_back(e);
    }
    std::vector<std::vector<ApplicantId>> tier_lists;
    int expected_tier = 1;
    std::set<std::string> seen;
    for (auto& [t, tier_entries] : tiers) {
      if (t != expected_tier) {
        ThrowValidation(tier_entries.front()->location + ": " + desc +
                        " has empty tier " + std::to_string(expected_tier));
      }
      ++expected_tier;
      // Re-key within-tier positions as ranks for the contiguity check.
      std::vector<RawPreferenceEntry> rekeyed;
      for (const RawPreferenceEntry* e : tier_entries) {
        RawPreferenceEntry copy = *e;
        copy.rank_or_tier = *e->within_tier;
        rekeyed.push_back(copy);
        if (!seen.insert(e->counterpart).second) {
          ThrowValidation(e->location + ": " + desc + " lists applicant '" +
                          e->counterpart + "' twice");
        }
      }
      std::vector<const RawPreferenceEntry*> ptrs;
      for (const RawPreferenceEntry& e : rekeyed) ptrs.push_back(&e);
      tier_lists.push_back(OrderedList<ApplicantId>(
          ptrs, desc + " tier " + std::to_string(t), applicant_index,
          "applicant"));
    }
    program_prefs.emplace_back(TieredPreferenceList(std::move(tier_lists), n));
  }

  return MarketInstance(std::move(applicant_names), std::move(program_names),
                        std::move(capacities), std::move(applicant_prefs),
                        std::move(program_prefs));
}

RawMarket ToRaw(const MarketInstance& market) {
  RawMarket raw;
  for (const std::string& name : market.applicant_names()) {
    raw.applicants.push_back(name);
  }
  for (int p = 0; p < market.program_count(); ++p) {
    raw.programs.push_back(
        {market.program_name(ProgramId(p)), market.capacity(ProgramId(p)), ""});
  }
  for (int a = 0; a < market.applicant_count(); ++a) {
    const auto& list = market.applicant_prefs(ApplicantId(a));
    for (int r = 1; r <= list.size(); ++r) {
      raw.applicant_entries.push_back({market.applicant_name(ApplicantId(a)),
                                       r, std::nullopt,
                                       market.program_name(list.AtRank(r)),
                                       ""});
    }
  }
  for (int p = 0; p < market.program_count(); ++p) {
    const std::string& owner = market.program_name(ProgramId(p));
    const ProgramPreferences& prefs = market.program_prefs(ProgramId(p));
    if (const auto* tiered = std::get_if<TieredPreferenceList>(&prefs)) {
      for (int t = 1; t <= tiered->tier_count(); ++t) {
        const auto tier = tiered->tier(t);
        for (size_t w = 0; w < tier.size(); ++w) {
          raw.program_entries.push_back({owner, t, static_cast<int>(w + 1),
                                         market.applicant_name(tier[w]), ""});
        }
      }
    } else {
      const auto& list = std::get<PreferenceList<ApplicantId>>(prefs);
      for (int r = 1; r <= list.size(); ++r) {
        raw.program_entries.push_back(
            {owner, r, std::nullopt, market.applicant_name(list.AtRank(r)), ""});
      }
    }
  }
  return raw;
}

}  // namespace resmatch
