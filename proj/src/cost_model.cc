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

#include "resmatch/cost_model.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "resmatch/error.h"

namespace resmatch {

namespace {

// Absorbs rounding in probability-weighted spend when comparing to a budget
// held in whole cents.
constexpr double kBudgetSlackCents = 1e-6;

}  // namespace

std::string FormatDollars(double cents) {
  const bool negative = cents < 0;
  const long long whole = std::llround(std::fabs(cents));
  std::string digits = std::to_string(whole / 100);
  for (int i = static_cast<int>(digits.size()) - 3; i > 0; i -= 3) {
    digits.insert(i, ",");
  }
  char tail[8];
  std::snprintf(tail, sizeof(tail), ".%02lld", whole % 100);
  return (negative ? "-$" : "$") + digits + tail;
}

FeeSchedule::FeeSchedule(std::vector<FeeTier> tiers) : tiers_(std::move(tiers)) {
  if (tiers_.empty()) ThrowValidation("fee schedule has no tiers");
  int expected_first = 1;
  for (size_t i = 0; i < tiers_.size(); ++i) {
    const FeeTier& tier = tiers_[i];
    const std::string where = "fee tier " + std::to_string(i + 1);
    if (tier.first != expected_first) {
      ThrowValidation(where + " starts at application " +
                      std::to_string(tier.first) + ", expected " +
                      std::to_string(expected_first));
    }
    if (tier.fee < Money()) ThrowValidation(where + " has a negative fee");
    const bool is_last = i + 1 == tiers_.size();
    if (!tier.last) {
      if (!is_last) ThrowValidation(where + " is open-ended but not last");
      break;
    }
    if (*tier.last < tier.first) {
      ThrowValidation(where + " ends before it starts");
    }
    if (is_last) ThrowValidation("the last fee tier must be open-ended");
    expected_first = *tier.last + 1;
  }
}

Money FeeSchedule::CostOf(int applications) const {
  if (applications < 0) ThrowValidation("negative application count");
  Money total;
  for (const FeeTier& tier : tiers_) {
    if (applications < tier.first) break;
    const int last = tier.last ? std::min(*tier.last, applications)
                               : applications;
    if (tier.kind == FeeTier::Kind::kFlat) {
      total = total + tier.fee;
    } else {
      total = total + tier.fee * (last - tier.first + 1);
    }
  }
  return total;
}

const ProgramTerms& CostSpec::TermsFor(int application) const {
  const auto it = overrides.find(application);
  return it == overrides.end() ? terms : it->second;
}

namespace {

void ValidateTerms(const ProgramTerms& terms, const std::string& where) {
  if (!(terms.interview_prob >= 0 && terms.interview_prob <= 1)) {
    ThrowValidation(where + ": interview probability must lie in [0, 1]");
  }
  if (terms.interview_cost < Money()) {
    ThrowValidation(where + ": interview cost is negative");
  }
  if (!(terms.interview_time >= 0) || !std::isfinite(terms.interview_time)) {
    ThrowValidation(where + ": interview time must be non-negative");
  }
  if (terms.payoff_if_rejected < Money()) {
    ThrowValidation(where + ": payoff if rejected is negative");
  }
  if (terms.payoff_if_interviewed < terms.payoff_if_rejected) {
    ThrowValidation(where +
                    ": payoff if interviewed is below payoff if rejected");
  }
}

}  // namespace

void CostSpec::Validate() const {
  if (fees.tiers().empty()) ThrowValidation("cost spec has no fee schedule");
  ValidateTerms(terms, "default terms");
  for (const auto& [application, override_terms] : overrides) {
    if (application < 1) {
      ThrowValidation("override for application " +
                      std::to_string(application) + " is out of range");
    }
    ValidateTerms(override_terms,
                  "override for application " + std::to_string(application));
  }
}

Money ApplicationCost(int applications, const CostSpec& spec) {
  return spec.fees.CostOf(applications);
}

double ExpectedProgramPayoff(const ProgramTerms& terms) {
  const double p = terms.interview_prob;
  return p * static_cast<double>(terms.payoff_if_interviewed.cents() -
                                 terms.interview_cost.cents()) +
         (1 - p) * static_cast<double>(terms.payoff_if_rejected.cents());
}

namespace {

struct Sums {
  double payoff = 0;
  double interviews = 0;
  double interview_spend = 0;
  double interview_time = 0;
};

Sums Accumulate(const ProgramTerms& terms, double weight,
                BudgetReading reading) {
  const double attend = reading == BudgetReading::kExpected
                            ? terms.interview_prob
                            : 1.0;
  Sums s;
  s.payoff = weight * ExpectedProgramPayoff(terms);
  s.interviews = weight * terms.interview_prob;
  s.interview_spend =
      weight * attend * static_cast<double>(terms.interview_cost.cents());
  s.interview_time = weight * attend * terms.interview_time;
  return s;
}

}  // namespace

ApplicationOutcome TotalExpectedPayoff(int applications, const CostSpec& spec,
                                       const Budget& budget,
                                       BudgetReading reading) {
  if (applications < 0) ThrowValidation("negative application count");
  Sums sums;
  if (spec.overrides.empty()) {
    sums = Accumulate(spec.terms, applications, reading);
  } else {
    for (int j = 1; j <= applications; ++j) {
      const Sums one = Accumulate(spec.TermsFor(j), 1.0, reading);
      sums.payoff += one.payoff;
      sums.interviews += one.interviews;
      sums.interview_spend += one.interview_spend;
      sums.interview_time += one.interview_time;
    }
  }
  ApplicationOutcome out;
  out.applications = applications;
  out.application_cost = ApplicationCost(applications, spec);
  out.expected_interviews = sums.interviews;
  out.expected_spend_cents =
      static_cast<double>(out.application_cost.cents()) + sums.interview_spend;
  out.expected_time = sums.interview_time;
  out.value_cents =
      sums.payoff - static_cast<double>(out.application_cost.cents());
  out.feasible =
      out.expected_spend_cents <=
          static_cast<double>(budget.money.cents()) + kBudgetSlackCents &&
      out.expected_time <= budget.time + 1e-9;
  return out;
}

ApplicationOutcome OptimalApplicationCount(const CostSpec& spec,
                                           const Budget& budget,
                                           int max_applications,
                                           BudgetReading reading) {
  if (max_applications < 0) ThrowValidation("negative application limit");
  ApplicationOutcome best = TotalExpectedPayoff(0, spec, budget, reading);
  for (int q = 1; q <= max_applications; ++q) {
    const ApplicationOutcome candidate =
        TotalExpectedPayoff(q, spec, budget, reading);
    if (candidate.feasible && candidate.value_cents > best.value_cents) {
      best = candidate;
    }
  }
  return best;
}

}  // namespace resmatch
