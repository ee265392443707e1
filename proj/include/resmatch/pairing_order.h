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

#ifndef RESMATCH_PAIRING_ORDER_H_
#define RESMATCH_PAIRING_ORDER_H_

#include <cstddef>
#include <iterator>
#include <ranges>
#include <vector>

namespace resmatch {

// One Boston Pool step: program tier `tier` paired with applicant rank `rank`.
struct PairingStep {
  int tier = 1;
  int rank = 1;

  friend bool operator==(const PairingStep&, const PairingStep&) = default;
};

// The Boston Pool pairing order as an unbounded lazy range:
// (1,1), (2,1), (1,2), (2,2), (3,1), (3,2), (1,3), (2,3), (3,3), ...
// Diagonal d first emits (d, k) for k = 1..d-1, then (t, d) for t = 1..d.
class PairingOrder : public std::ranges::view_base {
 public:
  class iterator {
   public:
    using value_type = PairingStep;
    using difference_type = std::ptrdiff_t;

    PairingStep operator*() const {
      if (offset_ < diagonal_ - 1) return {diagonal_, offset_ + 1};
      return {offset_ - (diagonal_ - 1) + 1, diagonal_};
    }
    iterator& operator++() {
      if (++offset_ == 2 * diagonal_ - 1) {
        ++diagonal_;
        offset_ = 0;
      }
      return *this;
    }
    iterator operator++(int) {
      iterator old = *this;
      ++*this;
      return old;
    }
    int diagonal() const { return diagonal_; }

    friend bool operator==(const iterator&, const iterator&) = default;
    friend bool operator==(const iterator&, std::default_sentinel_t) {
      return false;
    }

   private:
    int diagonal_ = 1;
    int offset_ = 0;
  };

  iterator begin() const { return {}; }
  std::default_sentinel_t end() const { return {}; }
};

// All steps on diagonals 1..max_diagonal, in order.
std::vector<PairingStep> PairingStepsThrough(int max_diagonal);

}  // namespace resmatch

#endif  // RESMATCH_PAIRING_ORDER_H_
