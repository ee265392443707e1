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

// Core market types: participant identifiers, preference lists, market
// instances and many-to-one matchings.
//
// Participants are named by opaque strings in files; a validated
// MarketInstance maps them to dense indices (sorted name order) so that rank
// queries are O(1). A program ranks applicants either with a strict list or
// with a tiered list (tiers of applicants, ranked within each tier).

#ifndef RESMATCH_MARKET_H_
#define RESMATCH_MARKET_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "resmatch/error.h"

namespace resmatch {

template <typename Tag>
class Index {
 public:
  constexpr Index() = default;
  constexpr explicit Index(int32_t value) : value_(value) {}

  constexpr int32_t value() const { return value_; }

  friend constexpr auto operator<=>(Index, Index) = default;

 private:
  int32_t value_ = -1;
};

struct ApplicantTag {};
struct ProgramTag {};
using ApplicantId = Index<ApplicantTag>;
using ProgramId = Index<ProgramTag>;

// Strict ordinal preference list. Position k (1-based) is rank k; ids that
// do not appear are unranked.
template <typename Id>
class PreferenceList {
 public:
  PreferenceList() = default;

  // `universe_size` is the number of valid ids on the counterpart side.
  PreferenceList(std::vector<Id> order, int universe_size)
      : order_(std::move(order)), rank_(universe_size, 0) {
    for (size_t i = 0; i < order_.size(); ++i) {
      const int32_t v = order_[i].value();
      if (v < 0 || v >= universe_size) {
        ThrowValidation("preference list references unknown id index " +
                        std::to_string(v));
      }
      if (rank_[v] != 0) {
        ThrowValidation("duplicate id index " + std::to_string(v) +
                        " in preference list");
      }
      rank_[v] = static_cast<int32_t>(i + 1);
    }
  }

  std::optional<int> RankOf(Id id) const {
    const int32_t v = id.value();
    if (v < 0 || v >= static_cast<int32_t>(rank_.size()) || rank_[v] == 0) {
      return std::nullopt;
    }
    return rank_[v];
  }
  bool Contains(Id id) const { return RankOf(id).has_value(); }

  // 1-based.
  Id AtRank(int rank) const { return order_.at(rank - 1); }

  std::span<const Id> order() const { return order_; }
  int size() const { return static_cast<int>(order_.size()); }
  bool empty() const { return order_.empty(); }
  int universe_size() const { return static_cast<int>(rank_.size()); }

  friend bool operator==(const PreferenceList&, const PreferenceList&) =
      default;

 private:
  std::vector<Id> order_;
  std::vector<int32_t> rank_;  // 0 = unranked
};

struct TierPosition {
  int tier = 0;    // 1-based
  int within = 0;  // 1-based position inside the tier

  friend auto operator<=>(const TierPosition&, const TierPosition&) = default;
};

// Program-side tiered list. Comparing two applicants by (tier, within) is the
// same as comparing their positions in the flattened list, so the flattened
// position is used as the program's global rank.
class TieredPreferenceList {
 public:
  TieredPreferenceList() = default;
  TieredPreferenceList(std::vector<std::vector<ApplicantId>> tiers,
                       int universe_size);

  int tier_count() const { return static_cast<int>(tier_ends_.size()); }
  // 1-based tier index.
  std::span<const ApplicantId> tier(int t) const;

  std::optional<TierPosition> PositionOf(ApplicantId id) const;
  std::optional<int> GlobalRankOf(ApplicantId id) const {
    return flat_.RankOf(id);
  }
  const PreferenceList<ApplicantId>& flattened() const { return flat_; }
  int size() const { return flat_.size(); }

  friend bool operator==(const TieredPreferenceList&,
                         const TieredPreferenceList&) = default;

 private:
  PreferenceList<ApplicantId> flat_;
  std::vector<int> tier_ends_;  // exclusive end offset of each tier in flat_
};

using ProgramPreferences =
    std::variant<PreferenceList<ApplicantId>, TieredPreferenceList>;

inline bool IsTiered(const ProgramPreferences& prefs) {
  return std::holds_alternative<TieredPreferenceList>(prefs);
}

// The strict order a program's list induces (tiers concatenated).
const PreferenceList<ApplicantId>& FlatOrder(const ProgramPreferences& prefs);

class MarketInstance {
 public:
  MarketInstance() = default;
  // Checks every invariant. Names must be unique within a side; their order
  // defines the dense ids.
  MarketInstance(std::vector<std::string> applicant_names,
                 std::vector<std::string> program_names,
                 std::vector<int> capacities,
                 std::vector<PreferenceList<ProgramId>> applicant_prefs,
                 std::vector<ProgramPreferences> program_prefs);

  int applicant_count() const {
    return static_cast<int>(applicant_names_.size());
  }
  int program_count() const { return static_cast<int>(program_names_.size()); }

  int capacity(ProgramId p) const { return capacities_.at(p.value()); }
  // S, the sum of all capacities.
  int64_t total_seats() const;

  const std::string& applicant_name(ApplicantId a) const {
    return applicant_names_.at(a.value());
  }
  const std::string& program_name(ProgramId p) const {
    return program_names_.at(p.value());
  }
  std::optional<ApplicantId> FindApplicant(std::string_view name) const;
  std::optional<ProgramId> FindProgram(std::string_view name) const;

  const PreferenceList<ProgramId>& applicant_prefs(ApplicantId a) const {
    return applicant_prefs_.at(a.value());
  }
  const ProgramPreferences& program_prefs(ProgramId p) const {
    return program_prefs_.at(p.value());
  }

  // r: the rank applicant `a` gave program `p`.
  std::optional<int> ApplicantRank(ApplicantId a, ProgramId p) const {
    return applicant_prefs(a).RankOf(p);
  }
  // rho: the rank program `p` gave applicant `a` (flattened for tiers).
  std::optional<int> ProgramRank(ProgramId p, ApplicantId a) const {
    return FlatOrder(program_prefs(p)).RankOf(a);
  }
  bool MutuallyRanked(ApplicantId a, ProgramId p) const {
    return ApplicantRank(a, p).has_value() && ProgramRank(p, a).has_value();
  }

  bool HasTieredPrograms() const;
  bool HasStrictPrograms() const;

  std::span<const std::string> applicant_names() const {
    return applicant_names_;
  }
  std::span<const std::string> program_names() const { return program_names_; }
  std::span<const int> capacities() const { return capacities_; }

  friend bool operator==(const MarketInstance&, const MarketInstance&) =
      default;

 private:
  std::vector<std::string> applicant_names_;
  std::vector<std::string> program_names_;
  std::vector<int> capacities_;
  std::vector<PreferenceList<ProgramId>> applicant_prefs_;
  std::vector<ProgramPreferences> program_prefs_;
};

// Many-to-one assignment. The inverse view is kept sorted by applicant id.
class Matching {
 public:
  Matching() = default;
  // Checks ids against the market and that no program exceeds capacity.
  // Does not check mutual ranking; see stability.h.
  Matching(const MarketInstance& market,
           std::vector<std::optional<ProgramId>> assignment);

  static Matching Empty(const MarketInstance& market);

  std::optional<ProgramId> ProgramOf(ApplicantId a) const {
    return assignment_.at(a.value());
  }
  std::span<const ApplicantId> ApplicantsOf(ProgramId p) const {
    return assigned_.at(p.value());
  }
  int matched_count() const;
  int applicant_count() const { return static_cast<int>(assignment_.size()); }
  int program_count() const { return static_cast<int>(assigned_.size()); }

  const std::vector<std::optional<ProgramId>>& assignment() const {
    return assignment_;
  }

  friend bool operator==(const Matching& a, const Matching& b) {
    return a.assignment_ == b.assignment_ && a.assigned_ == b.assigned_;
  }

 private:
  std::vector<std::optional<ProgramId>> assignment_;
  std::vector<std::vector<ApplicantId>> assigned_;
};

// Unvalidated market data as read from a file. `location` strings are
// carried into error messages.
struct RawPreferenceEntry {
  std::string owner;
  int rank_or_tier = 0;
  std::optional<int> within_tier;  // set only for tiered program lists
  std::string counterpart;
  std::string location;
};

struct RawProgram {
  std::string id;
  int64_t capacity = 0;
  std::string location;
};

struct RawMarket {
  // Applicants are also declared implicitly by owning an entry.
  std::vector<std::string> applicants;
  std::vector<RawProgram> programs;
  std::vector<RawPreferenceEntry> applicant_entries;
  std::vector<RawPreferenceEntry> program_entries;
};

// Canonicalizes ids (sorted by name) and checks every invariant: no
// duplicate ids within a list, contiguous ranks, known counterparts,
// positive capacities, no empty tiers, one list kind per program.
MarketInstance ValidateMarket(const RawMarket& raw);

// Inverse of ValidateMarket, up to entry order.
RawMarket ToRaw(const MarketInstance& market);

}  // namespace resmatch

#endif  // RESMATCH_MARKET_H_
