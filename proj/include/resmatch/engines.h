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

// Matching procedures: Gale-Shapley deferred acceptance (either side
// proposing), the Boston Pool plan over tiered program lists, and an
// exhaustive stable-matching enumerator used as a test oracle.
//
// No engine pairs an applicant and a program unless both ranked each other.

#ifndef RESMATCH_ENGINES_H_
#define RESMATCH_ENGINES_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "resmatch/market.h"
#include "resmatch/pairing_order.h"

namespace resmatch {

enum class ProposingSide { kApplicants, kPrograms };

struct TraceEvent {
  enum class Kind {
    kPropose,  // proposer offers to receiver
    kHold,     // receiver tentatively holds the offer
    kReject,   // receiver rejects the offer outright
    kDisplace, // receiver drops `displaced` to hold the new offer
    kStep,     // Boston Pool step (tier, rank) begins
    kAssign,   // Boston Pool final assignment
  };
  Kind kind = Kind::kPropose;
  ProposingSide proposer_side = ProposingSide::kApplicants;
  std::optional<ApplicantId> applicant;
  std::optional<ProgramId> program;
  std::optional<ApplicantId> displaced;  // kDisplace with programs receiving
  std::optional<ProgramId> displaced_program;  // kDisplace with applicants receiving
  std::optional<PairingStep> step;
};

using TraceSink = std::function<void(const TraceEvent&)>;

// Deferred acceptance. Free proposers wait in a FIFO queue seeded in id
// order. Requires strict program lists (see FlattenTiers).
Matching GaleShapley(const MarketInstance& market, ProposingSide side,
                     const TraceSink& trace = {});

// Boston Pool plan. Walks PairingOrder up to diagonal
// max(longest applicant list, deepest tier count); at step (t, k) every
// unmatched applicant sitting in tier t of a program they ranked k is
// assigned to it, in within-tier order, while seats remain. Assignments are
// final. Requires tiered lists on every program.
Matching BostonPool(const MarketInstance& market, const TraceSink& trace = {});

// Replaces each tiered program list by its flattened strict list.
MarketInstance FlattenTiers(const MarketInstance& market);

struct EnumerationOptions {
  // Upper bound on candidate assignments (product over applicants of
  // 1 + number of mutually ranked programs).
  int64_t max_assignments = 1'000'000;
};

// Every capacity-respecting matching of mutually ranked pairs that has no
// blocking pair, sorted by assignment vector (programs in id order, the
// unmatched option last). Uses its own definition-level stability test,
// independent of stability.h.
std::vector<Matching> EnumerateStableMatchings(
    const MarketInstance& market, const EnumerationOptions& options = {});

}  // namespace resmatch

#endif  // RESMATCH_ENGINES_H_
