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

#include "resmatch/simulator.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <thread>

#include "resmatch/engines.h"
#include "resmatch/error.h"
#include "resmatch/market.h"

namespace resmatch {

void SimConfig::Validate() const {
  if (applicants <= 0) ThrowValidation("applicants must be positive");
  if (programs <= 0) ThrowValidation("programs must be positive");
  if (capacity_min <= 0 || capacity_max < capacity_min) {
    ThrowValidation("capacity range must satisfy 0 < min <= max");
  }
  if (applications < 0) ThrowValidation("applications must be non-negative");
  if (!(interview_prob >= 0 && interview_prob <= 1)) {
    ThrowValidation("interview_prob must lie in [0, 1]");
  }
  if (top_k < 0) ThrowValidation("top_k must be non-negative");
  if (!(correlation >= 0 && correlation <= 1)) {
    ThrowValidation("correlation must lie in [0, 1]");
  }
  if (replicas <= 0) ThrowValidation("replicas must be positive");
  if (threads < 0) ThrowValidation("threads must be non-negative");
}

uint64_t DeriveSeed(uint64_t seed, uint64_t stream, uint64_t replica) {
  auto mix = [](uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ stream) ^ replica);
}

double UniformUnit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int UniformInt(std::mt19937_64& rng, int lo, int hi) {
  const uint64_t range = static_cast<uint64_t>(hi - lo) + 1;
  const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                         std::numeric_limits<uint64_t>::max() % range;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return lo + static_cast<int>(x % range);
}

namespace {

struct ReplicaResult {
  ReplicaStats stats;
  std::vector<int> interviews;  // per applicant
  std::vector<bool> matched;    // per applicant
};

// Indices 0..n-1 sorted by descending score, ties by index.
std::vector<int32_t> RankByScore(std::span<const double> score) {
  std::vector<int32_t> order(score.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int32_t x, int32_t y) {
    return score[x] > score[y];
  });
  return order;
}

ReplicaResult RunReplica(const SimConfig& config,
                         std::span<const int> applications,
                         const std::vector<std::string>& applicant_names,
                         const std::vector<std::string>& program_names,
                         uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int n = config.applicants;
  const int np = config.programs;
  const double c = config.correlation;

  std::vector<int> capacities(np);
  for (int& cap : capacities) {
    cap = UniformInt(rng, config.capacity_min, config.capacity_max);
  }
  std::vector<double> applicant_quality(n), program_quality(np);
  for (double& x : applicant_quality) x = UniformUnit(rng);
  for (double& x : program_quality) x = UniformUnit(rng);

  // Utility applicant a sees in program p, and program p sees in applicant a.
  std::vector<double> applicant_view(static_cast<size_t>(n) * np);
  std::vector<double> program_view(static_cast<size_t>(np) * n);
  for (int a = 0; a < n; ++a) {
    for (int p = 0; p < np; ++p) {
      applicant_view[a * np + p] =
          c * program_quality[p] + (1 - c) * UniformUnit(rng);
    }
  }
  for (int p = 0; p < np; ++p) {
    for (int a = 0; a < n; ++a) {
      program_view[p * n + a] =
          c * applicant_quality[a] + (1 - c) * UniformUnit(rng);
    }
  }

  // Each applicant applies to its top-q programs and ranks all of them.
  std::vector<std::vector<int32_t>> applied(n);
  std::vector<std::vector<int32_t>> pool(np);
  for (int a = 0; a < n; ++a) {
    auto order = RankByScore(
        std::span<const double>(applicant_view).subspan(a * np, np));
    order.resize(std::min(applications[a], np));
    for (const int32_t p : order) pool[p].push_back(a);
    applied[a] = std::move(order);
  }

  std::vector<std::vector<bool>> interviewed(np, std::vector<bool>(n, false));
  if (config.screening == ScreeningRule::kProbability) {
    for (int a = 0; a < n; ++a) {
      for (const int32_t p : applied[a]) {
        if (UniformUnit(rng) < config.interview_prob) interviewed[p][a] = true;
      }
    }
  } else {
    for (int p = 0; p < np; ++p) {
      std::vector<int32_t>& candidates = pool[p];
      std::stable_sort(candidates.begin(), candidates.end(),
                       [&](int32_t x, int32_t y) {
                         return program_view[p * n + x] >
                                program_view[p * n + y];
                       });
      const size_t keep =
          std::min(candidates.size(), static_cast<size_t>(config.top_k));
      for (size_t i = 0; i < keep; ++i) interviewed[p][candidates[i]] = true;
    }
  }

  std::vector<PreferenceList<ProgramId>> applicant_prefs;
  applicant_prefs.reserve(n);
  ReplicaResult result;
  result.interviews.assign(n, 0);
  for (int a = 0; a < n; ++a) {
    std::vector<ProgramId> list;
    for (const int32_t p : applied[a]) {
      list.emplace_back(p);
      if (interviewed[p][a]) ++result.interviews[a];
    }
    result.stats.applications += static_cast<int64_t>(list.size());
    result.stats.interviews += result.interviews[a];
    applicant_prefs.emplace_back(std::move(list), np);
  }
  std::vector<ProgramPreferences> program_prefs;
  program_prefs.reserve(np);
  for (int p = 0; p < np; ++p) {
    std::vector<int32_t> ranked;
    for (int a = 0; a < n; ++a) {
      if (interviewed[p][a]) ranked.push_back(a);
    }
    std::stable_sort(ranked.begin(), ranked.end(), [&](int32_t x, int32_t y) {
      return program_view[p * n + x] > program_view[p * n + y];
    });
    std::vector<ApplicantId> list(ranked.begin(), ranked.end());
    program_prefs.emplace_back(PreferenceList<ApplicantId>(std::move(list), n));
  }

  const MarketInstance market(applicant_names, program_names, capacities,
                              std::move(applicant_prefs),
                              std::move(program_prefs));
  const Matching matching = GaleShapley(market, ProposingSide::kApplicants);

  result.matched.assign(n, false);
  for (int a = 0; a < n; ++a) {
    result.matched[a] = matching.ProgramOf(ApplicantId(a)).has_value();
  }
  result.stats.matched_applicants = matching.matched_count();
  result.stats.seats = static_cast<int>(market.total_seats());
  for (int p = 0; p < np; ++p) {
    result.stats.filled_seats +=
        static_cast<int>(matching.ApplicantsOf(ProgramId(p)).size());
  }
  return result;
}

}  // namespace

SimulationResult SimulateMarket(const SimConfig& config) {
  config.Validate();
  const std::vector<int> applications(config.applicants, config.applications);
  return SimulateMarket(config, applications, 0);
}

SimulationResult SimulateMarket(const SimConfig& config,
                                std::span<const int> applications,
                                uint64_t stream) {
  config.Validate();
  if (static_cast<int>(applications.size()) != config.applicants) {
    ThrowValidation("need one application count per applicant");
  }
  int max_k = 0;
  for (const int q : applications) {
    if (q < 0) ThrowValidation("application counts must be non-negative");
    max_k = std::max(max_k, std::min(q, config.programs));
  }

  std::vector<std::string> applicant_names, program_names;
  for (int a = 0; a < config.applicants; ++a) {
    applicant_names.push_back("a" + std::to_string(a));
  }
  for (int p = 0; p < config.programs; ++p) {
    program_names.push_back("p" + std::to_string(p));
  }

  std::vector<ReplicaResult> results(config.replicas);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int r = next++; r < config.replicas; r = next++) {
      results[r] = RunReplica(config, applications, applicant_names,
                              program_names,
                              DeriveSeed(config.seed, stream, r));
    }
  };
  int threads = config.threads == 0
                    ? static_cast<int>(std::thread::hardware_concurrency())
                    : config.threads;
  threads = std::clamp(threads, 1, config.replicas);
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
  }

  SimulationResult out;
  MatchCurve& curve = out.curve;
  curve.replicas = config.replicas;
  curve.exact_count.assign(max_k + 1, 0);
  curve.exact_matched.assign(max_k + 1, 0);
  int64_t total_applications = 0, total_interviews = 0, total_matched = 0;
  for (const ReplicaResult& r : results) {
    out.replicas.push_back(r.stats);
    total_applications += r.stats.applications;
    total_interviews += r.stats.interviews;
    total_matched += r.stats.matched_applicants;
    for (int a = 0; a < config.applicants; ++a) {
      const int k = r.interviews[a];
      ++curve.exact_count[k];
      if (r.matched[a]) ++curve.exact_matched[k];
      curve.max_observed_k = std::max(curve.max_observed_k, k);
    }
  }
  int64_t n_k = 0, m_k = 0;
  curve.points.resize(max_k + 1);
  for (int k = max_k; k >= 0; --k) {
    n_k += curve.exact_count[k];
    m_k += curve.exact_matched[k];
    MatchCurve::Point& point = curve.points[k];
    point.k = k;
    point.n_k = n_k;
    point.matched_k = m_k;
    if (n_k > 0) {
      point.cum_prob = static_cast<double>(m_k) / static_cast<double>(n_k);
      point.std_error = std::sqrt(point.cum_prob * (1 - point.cum_prob) /
                                  static_cast<double>(n_k));
    }
  }
  const double samples =
      static_cast<double>(config.applicants) * config.replicas;
  out.mean_applications = static_cast<double>(total_applications) / samples;
  out.mean_interviews = static_cast<double>(total_interviews) / samples;
  out.match_rate = static_cast<double>(total_matched) / samples;
  if (total_applications > 0) {
    out.interview_rate = static_cast<double>(total_interviews) /
                         static_cast<double>(total_applications);
  }
  return out;
}

std::vector<EscalationRound> EscalationDynamics(const SimConfig& config,
                                                int rounds,
                                                const CostSpec& cost,
                                                const Budget& budget,
                                                BudgetReading reading) {
  config.Validate();
  cost.Validate();
  if (rounds < 1) ThrowValidation("escalation needs at least one round");
  std::vector<int> applications(config.applicants,
                                std::min(config.applications, config.programs));
  std::vector<EscalationRound> series;
  for (int round = 0; round < rounds; ++round) {
    const SimulationResult sim = SimulateMarket(
        config, applications, static_cast<uint64_t>(round) + 1);
    EscalationRound row;
    row.round = round;
    row.mean_applications = sim.mean_applications;
    row.mean_interviews = sim.mean_interviews;
    row.interview_rate =
        sim.interview_rate.value_or(cost.terms.interview_prob);
    series.push_back(row);

    CostSpec believed = cost;
    believed.terms.interview_prob = row.interview_rate;
    const ApplicationOutcome best =
        OptimalApplicationCount(believed, budget, config.programs, reading);
    std::fill(applications.begin(), applications.end(), best.applications);
  }
  return series;
}

}  // namespace resmatch
