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

// Seeded Monte Carlo simulation of synthetic residency markets.
//
// Each replica draws latent qualities for applicants and programs, builds
// noisy preferences around them, lets every applicant apply to its top-q
// programs, screens applications into interviews, and resolves the market
// with applicant-proposing deferred acceptance. A program ranks exactly the
// applicants it interviewed.
//
// Randomness: replica r of stream s draws from a 64-bit Mersenne Twister
// seeded with SplitMix64(seed, s, r), so results do not depend on how
// replicas are spread across threads.

#ifndef RESMATCH_SIMULATOR_H_
#define RESMATCH_SIMULATOR_H_

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "resmatch/cost_model.h"

namespace resmatch {

enum class ScreeningRule {
  kProbability,  // each application becomes an interview with fixed odds
  kTopK,         // each program interviews its top-k applicants
};

struct SimConfig {
  int applicants = 60;
  int programs = 20;
  int capacity_min = 1;
  int capacity_max = 3;
  int applications = 20;  // q per applicant (capped at `programs`)
  ScreeningRule screening = ScreeningRule::kProbability;
  double interview_prob = 1.0 / 7.0;
  int top_k = 5;
  // 0 = independent uniform preferences, 1 = one common ranking per side.
  double correlation = 0.5;
  int replicas = 2000;
  uint64_t seed = 1;
  int threads = 1;  // 0 = hardware concurrency

  void Validate() const;
};

// SplitMix64 finalizer over (seed, stream, replica).
uint64_t DeriveSeed(uint64_t seed, uint64_t stream, uint64_t replica);

// Uniform double in [0, 1) from the top 53 bits of one draw.
double UniformUnit(std::mt19937_64& rng);
// Uniform integer in [lo, hi], unbiased.
int UniformInt(std::mt19937_64& rng, int lo, int hi);

struct ReplicaStats {
  int matched_applicants = 0;
  int filled_seats = 0;
  int seats = 0;
  int64_t applications = 0;
  int64_t interviews = 0;
};

// Cumulative match probability given at least k interviews (programs that
// ranked the applicant), k = 0..max_k.
struct MatchCurve {
  struct Point {
    int k = 0;
    double cum_prob = 0;  // matched_k / n_k, 0 when n_k = 0
    double std_error = 0;  // binomial standard error
    int64_t n_k = 0;      // applicant samples with >= k interviews
    int64_t matched_k = 0;
  };
  std::vector<Point> points;
  // Raw histograms: samples with exactly k interviews, and matched among them.
  std::vector<int64_t> exact_count;
  std::vector<int64_t> exact_matched;
  int replicas = 0;
  // Largest k observed in any replica.
  int max_observed_k = 0;
};

struct SimulationResult {
  MatchCurve curve;
  std::vector<ReplicaStats> replicas;
  double mean_applications = 0;  // per applicant
  double mean_interviews = 0;    // per applicant
  double match_rate = 0;
  // Total interviews / total applications; nullopt with no applications.
  std::optional<double> interview_rate;
};

SimulationResult SimulateMarket(const SimConfig& config);

// Same, with an explicit application count per applicant and stream index.
SimulationResult SimulateMarket(const SimConfig& config,
                                std::span<const int> applications,
                                uint64_t stream);

struct EscalationRound {
  int round = 0;
  double mean_applications = 0;
  double mean_interviews = 0;
  double interview_rate = 0;  // fed into the next round's best response
};

// Round 0 runs with config.applications for everyone; each later round,
// every applicant best-responds with OptimalApplicationCount under the
// previous round's empirical interview rate (the cost spec's own probability
// when nobody applied).
std::vector<EscalationRound> EscalationDynamics(
    const SimConfig& config, int rounds, const CostSpec& cost,
    const Budget& budget, BudgetReading reading = BudgetReading::kExpected);

}  // namespace resmatch

#endif  // RESMATCH_SIMULATOR_H_
