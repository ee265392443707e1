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

// Application and interview cost model for a single applicant.
//
// Money with a deterministic value (fees, budgets, unit costs) is held in
// integer cents. Expectations involving the interview probability are
// fractional and are reported as double cents.

#ifndef RESMATCH_COST_MODEL_H_
#define RESMATCH_COST_MODEL_H_

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace resmatch {

class Money {
 public:
  constexpr Money() = default;
  static constexpr Money FromCents(int64_t cents) { return Money(cents); }

  constexpr int64_t cents() const { return cents_; }
  constexpr double dollars() const { return static_cast<double>(cents_) / 100; }

  friend constexpr Money operator+(Money a, Money b) {
    return Money(a.cents_ + b.cents_);
  }
  friend constexpr Money operator-(Money a, Money b) {
    return Money(a.cents_ - b.cents_);
  }
  friend constexpr Money operator*(Money a, int64_t k) {
    return Money(a.cents_ * k);
  }
  friend constexpr auto operator<=>(Money, Money) = default;

 private:
  constexpr explicit Money(int64_t cents) : cents_(cents) {}
  int64_t cents_ = 0;
};

// "$1,234.56"
std::string FormatDollars(double cents);

struct FeeTier {
  enum class Kind {
    kFlat,            // one charge covering every application in the tier
    kPerApplication,
  };
  int first = 1;              // first application number covered, 1-based
  std::optional<int> last;    // inclusive; nullopt = open-ended
  Kind kind = Kind::kPerApplication;
  Money fee;
};

// Cumulative application cost A(q). Tiers must start at application 1, be
// contiguous, and end with an open-ended tier.
class FeeSchedule {
 public:
  FeeSchedule() = default;
  explicit FeeSchedule(std::vector<FeeTier> tiers);

  Money CostOf(int applications) const;
  std::span<const FeeTier> tiers() const { return tiers_; }

 private:
  std::vector<FeeTier> tiers_;
};

// Per-application parameters.
struct ProgramTerms {
  double interview_prob = 0;  // p(I = 1)
  Money interview_cost;       // E[C]
  double interview_time = 0;  // t, in the budget's time units
  Money payoff_if_interviewed;  // E[f | I = 1]
  Money payoff_if_rejected;     // E[f | I = 0]
};

struct CostSpec {
  FeeSchedule fees;
  ProgramTerms terms;
  // Overrides for the j-th application (1-based).
  std::map<int, ProgramTerms> overrides;

  const ProgramTerms& TermsFor(int application) const;
  // Throws kValidation on out-of-range probabilities or negative amounts.
  void Validate() const;
};

struct Budget {
  Money money;
  double time = 0;
};

enum class BudgetReading {
  kExpected,   // interview cost and time weighted by p(I = 1)
  kWorstCase,  // every application assumed to lead to an interview
};

Money ApplicationCost(int applications, const CostSpec& spec);

// p(I=1) * (E[f|I=1] - E[C]) + p(I=0) * E[f|I=0], in cents. The interview
// cost is only paid when an interview happens.
double ExpectedProgramPayoff(const ProgramTerms& terms);

struct ApplicationOutcome {
  int applications = 0;
  Money application_cost;
  double expected_interviews = 0;
  double expected_spend_cents = 0;  // budgeted money under the reading
  double expected_time = 0;
  double value_cents = 0;           // sum of program payoffs minus A(q)
  bool feasible = true;
};

ApplicationOutcome TotalExpectedPayoff(
    int applications, const CostSpec& spec, const Budget& budget,
    BudgetReading reading = BudgetReading::kExpected);

// Exhaustive scan of q in [0, max_applications]; ties go to the smaller q.
ApplicationOutcome OptimalApplicationCount(
    const CostSpec& spec, const Budget& budget, int max_applications,
    BudgetReading reading = BudgetReading::kExpected);

}  // namespace resmatch

#endif  // RESMATCH_COST_MODEL_H_
