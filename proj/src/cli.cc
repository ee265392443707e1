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

#include "resmatch/cli.h"

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "resmatch/config.h"
#include "resmatch/engines.h"
#include "resmatch/market_io.h"
#include "resmatch/payoff.h"
#include "resmatch/report.h"
#include "resmatch/simulator.h"
#include "resmatch/stability.h"

namespace resmatch {

namespace {

using Clock = std::chrono::steady_clock;

std::ofstream OpenOutput(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  }
  return out;
}

std::pair<std::string, std::string> Digest(const std::filesystem::path& path) {
  return {path.string(), Sha256Hex(ReadFileContents(path))};
}

struct ManifestSink {
  std::string path;  // empty = stderr

  void Emit(RunManifest manifest, Clock::time_point start,
            std::ostream& err) const {
    manifest.tool_version = kToolVersion;
    manifest.wall_seconds =
        std::chrono::duration<double>(Clock::now() - start).count();
    if (path.empty()) {
      err << "manifest: " << ToJson(manifest).dump() << '\n';
    } else {
      OpenOutput(path) << ToJson(manifest).dump(2) << '\n';
    }
  }
};

std::vector<std::string> SplitCommas(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

struct MatchOptions {
  std::string input, output, trace, engine = "gs", propose = "applicants";
  bool flatten = false;
};

void RunMatch(const MatchOptions& opt, const ManifestSink& manifest,
              std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  MarketInstance market = ParseMarketFile(opt.input);
  if (opt.flatten) market = FlattenTiers(market);

  std::ofstream trace_file;
  TraceSink trace;
  if (!opt.trace.empty()) {
    trace_file = OpenOutput(opt.trace);
    trace = [&](const TraceEvent& e) {
      trace_file << TraceEventJson(market, e) << '\n';
    };
  }
  const Matching matching =
      opt.engine == "boston"
          ? BostonPool(market, trace)
          : GaleShapley(market,
                        opt.propose == "programs" ? ProposingSide::kPrograms
                                                  : ProposingSide::kApplicants,
                        trace);
  if (opt.output.empty()) {
    WriteMatchingCsv(out, market, matching);
  } else {
    std::ofstream file = OpenOutput(opt.output);
    WriteMatchingCsv(file, market, matching);
  }
  RunManifest m;
  m.subcommand = "match";
  m.input_digests.push_back(Digest(opt.input));
  m.config = {{"engine", opt.engine},
              {"propose", opt.propose},
              {"flatten_tiers", opt.flatten}};
  manifest.Emit(std::move(m), start, err);
}

struct VerifyOptions {
  std::string input, matching;
};

void RunVerify(const VerifyOptions& opt, const ManifestSink& manifest,
               std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  const MarketInstance market = ParseMarketFile(opt.input);
  std::istringstream in(ReadFileContents(opt.matching));
  const Matching matching = ReadMatchingCsv(in, market, opt.matching);
  const std::vector<BlockingPair> pairs = FindBlockingPairs(market, matching);
  WriteStabilityReport(out, market, pairs);
  RunManifest m;
  m.subcommand = "verify";
  m.input_digests.push_back(Digest(opt.input));
  m.input_digests.push_back(Digest(opt.matching));
  manifest.Emit(std::move(m), start, err);
}

struct PayoffOptions {
  std::string input, spec, players, action_space = "auto", output, summary;
};

void RunPayoff(const PayoffOptions& opt, const ManifestSink& manifest,
               std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  const MarketInstance market = ParseMarketFile(opt.input);
  const std::filesystem::path spec_path =
      opt.spec.empty() ? DefaultConfigDir() / "payoff_default.cfg"
                       : std::filesystem::path(opt.spec);
  const PayoffSpec spec = LoadPayoffSpec(spec_path);

  std::vector<Participant> players;
  if (opt.players.empty()) {
    players = AllParticipants(market);
  } else {
    for (const std::string& name : SplitCommas(opt.players)) {
      if (const auto a = market.FindApplicant(name)) {
        players.emplace_back(*a);
      } else if (const auto p = market.FindProgram(name)) {
        players.emplace_back(*p);
      } else {
        ThrowValidation("--players: unknown participant '" + name + "'");
      }
    }
  }
  const ActionSpace space = opt.action_space == "subsets"
                                ? ActionSpace::kAllSubsets
                            : opt.action_space == "extremes"
                                ? ActionSpace::kRankAllOrNone
                                : ActionSpace::kAuto;
  const PayoffTable table = BuildPayoffTable(market, spec, players, space);
  const DominanceReport report = CheckRankAllDominance(table);

  if (opt.output.empty()) {
    WritePayoffTableCsv(out, market, table);
  } else {
    std::ofstream file = OpenOutput(opt.output);
    WritePayoffTableCsv(file, market, table);
  }
  const auto summary = DominanceSummary(market, table, report);
  if (opt.summary.empty()) {
    out << summary.dump() << '\n';
  } else {
    OpenOutput(opt.summary) << summary.dump(2) << '\n';
  }
  RunManifest m;
  m.subcommand = "payoff";
  m.input_digests.push_back(Digest(opt.input));
  m.input_digests.push_back(Digest(spec_path));
  m.config = {{"players", opt.players}, {"action_space", opt.action_space}};
  manifest.Emit(std::move(m), start, err);
}

struct CostOptions {
  std::string schedule, output, budget_money;
  std::optional<int> programs;
  std::optional<double> budget_time;
  bool optimize = false;
  bool worst_case = false;
};

void PrintOutcome(std::ostream& out, const ApplicationOutcome& o) {
  char interviews[32];
  std::snprintf(interviews, sizeof(interviews), "%.6f", o.expected_interviews);
  out << "applications: " << o.applications << '\n'
      << "application cost: " << FormatDollars(o.application_cost.cents())
      << '\n'
      << "expected interviews: " << interviews << '\n'
      << "expected total cost: " << FormatDollars(o.expected_spend_cents)
      << '\n'
      << "expected value: " << FormatDollars(o.value_cents) << '\n'
      << "feasible: " << (o.feasible ? "yes" : "no") << '\n';
}

void RunCost(const CostOptions& opt, const ManifestSink& manifest,
             std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  const std::filesystem::path schedule =
      opt.schedule.empty() ? DefaultConfigDir() / "ophtho2019.cfg"
                           : std::filesystem::path(opt.schedule);
  CostConfig config = LoadCostConfig(schedule);
  if (!opt.budget_money.empty()) {
    config.budget.money = ParseMoney(opt.budget_money, "--budget-money");
  }
  if (opt.budget_time) config.budget.time = *opt.budget_time;
  if (config.budget.money < Money() || config.budget.time < 0) {
    ThrowValidation("budgets must be non-negative");
  }
  const int q_max = opt.programs.value_or(config.programs);
  if (q_max < 0) ThrowValidation("--programs must be non-negative");
  const BudgetReading reading =
      opt.worst_case ? BudgetReading::kWorstCase : BudgetReading::kExpected;

  std::vector<ApplicationOutcome> rows;
  for (int q = 0; q <= q_max; ++q) {
    rows.push_back(TotalExpectedPayoff(q, config.spec, config.budget, reading));
  }
  if (!opt.output.empty()) {
    std::ofstream file = OpenOutput(opt.output);
    WriteCostCsv(file, rows);
  }
  if (opt.optimize) {
    out << "optimal ";
    PrintOutcome(out, OptimalApplicationCount(config.spec, config.budget,
                                              q_max, reading));
  } else if (opt.output.empty()) {
    WriteCostCsv(out, rows);
  } else {
    PrintOutcome(out, rows.back());
  }
  RunManifest m;
  m.subcommand = "cost";
  m.input_digests.push_back(Digest(schedule));
  m.config = {{"programs", q_max},
              {"budget_money_cents", config.budget.money.cents()},
              {"budget_time", config.budget.time},
              {"optimize", opt.optimize},
              {"worst_case", opt.worst_case}};
  manifest.Emit(std::move(m), start, err);
}

struct SimulateOptions {
  std::string config, out_dir = ".";
  std::optional<uint64_t> seed;
  std::optional<int> replicas;
  std::optional<int> threads;
  bool worst_case = false;
};

void RunSimulate(const SimulateOptions& opt, const std::string& manifest_path,
                 std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  SimulationConfig config = LoadSimulationConfig(opt.config);
  if (opt.seed) config.sim.seed = *opt.seed;
  if (opt.replicas) config.sim.replicas = *opt.replicas;
  if (opt.threads) config.sim.threads = *opt.threads;
  config.sim.Validate();

  const std::filesystem::path dir = opt.out_dir;
  std::filesystem::create_directories(dir);
  const SimulationResult result = SimulateMarket(config.sim);
  {
    std::ofstream file = OpenOutput(dir / "curve.csv");
    WriteCurveCsv(file, result.curve);
  }
  RunManifest m;
  m.subcommand = "simulate";
  m.input_digests.push_back(Digest(opt.config));
  if (config.escalation_rounds > 0) {
    const CostConfig cost = LoadCostConfig(*config.cost_config);
    m.input_digests.push_back(Digest(*config.cost_config));
    const auto series = EscalationDynamics(
        config.sim, config.escalation_rounds, cost.spec, cost.budget,
        opt.worst_case ? BudgetReading::kWorstCase : BudgetReading::kExpected);
    std::ofstream file = OpenOutput(dir / "escalation.csv");
    WriteEscalationCsv(file, series);
  }
  const KeyValueConfig snapshot = KeyValueConfig::Load(opt.config);
  m.config = {{"file", snapshot.Snapshot()},
              {"config_sha256", Sha256Hex(snapshot.Snapshot())},
              {"replicas", config.sim.replicas},
              {"threads", config.sim.threads},
              {"worst_case", opt.worst_case}};
  m.seed = config.sim.seed;

  char rate[32];
  std::snprintf(rate, sizeof(rate), "%.6f", result.match_rate);
  out << "replicas: " << config.sim.replicas << '\n'
      << "match rate: " << rate << '\n'
      << "wrote " << (dir / "curve.csv").string() << '\n';
  if (config.escalation_rounds > 0) {
    out << "wrote " << (dir / "escalation.csv").string() << '\n';
  }
  const ManifestSink sink{manifest_path.empty()
                              ? (dir / "manifest.json").string()
                              : manifest_path};
  sink.Emit(std::move(m), start, err);
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse:
      return kExitParse;
    case ErrorKind::kValidation:
      return kExitValidation;
    case ErrorKind::kGuardLimit:
      return kExitGuardLimit;
    case ErrorKind::kIo:
      return kExitIo;
    case ErrorKind::kInternal:
      return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace

int RunCli(std::span<const std::string> args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Two-sided matching market engine and cost simulator",
               "resmatch"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  std::string manifest_path;

  MatchOptions match;
  CLI::App* match_cmd =
      app.add_subcommand("match", "Run a matching engine on a market file");
  match_cmd->add_option("-i,--input", match.input, "Market file (CSV or JSON)")
      ->required();
  match_cmd->add_option("--engine", match.engine, "gs or boston")
      ->check(CLI::IsMember({"gs", "boston"}));
  match_cmd
      ->add_option("--propose", match.propose,
                   "Proposing side for gs: applicants or programs")
      ->check(CLI::IsMember({"applicants", "programs"}));
  match_cmd->add_option("-o,--output", match.output,
                        "Matching CSV (default: stdout)");
  match_cmd->add_option("--trace", match.trace,
                        "Write one JSON record per engine step");
  match_cmd->add_flag("--flatten-tiers", match.flatten,
                      "Concatenate tiered program lists into strict lists");
  match_cmd->add_option("--manifest", manifest_path, "Run manifest path");

  VerifyOptions verify;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Report blocking pairs of a matching");
  verify_cmd->add_option("-i,--input", verify.input, "Market file")->required();
  verify_cmd->add_option("-m,--matching", verify.matching, "Matching CSV")
      ->required();
  verify_cmd->add_option("--manifest", manifest_path, "Run manifest path");

  PayoffOptions payoff;
  CLI::App* payoff_cmd = app.add_subcommand(
      "payoff", "Rank/not-rank payoff table and dominance verdict");
  payoff_cmd->add_option("-i,--input", payoff.input, "Market file")
      ->required();
  payoff_cmd->add_option("--payoff", payoff.spec,
                         "Payoff spec (default: payoff_default.cfg)");
  payoff_cmd->add_option("--players", payoff.players,
                         "Comma-separated players (default: everyone)");
  payoff_cmd
      ->add_option("--action-space", payoff.action_space,
                   "auto, extremes or subsets")
      ->check(CLI::IsMember({"auto", "extremes", "subsets"}));
  payoff_cmd->add_option("-o,--output", payoff.output,
                         "Table CSV (default: stdout)");
  payoff_cmd->add_option("--summary", payoff.summary,
                         "Dominance summary JSON (default: stdout)");
  payoff_cmd->add_option("--manifest", manifest_path, "Run manifest path");

  CostOptions cost;
  CLI::App* cost_cmd =
      app.add_subcommand("cost", "Application cost table and optimizer");
  cost_cmd->add_option("--programs", cost.programs,
                       "Largest application count considered");
  cost_cmd->add_option("--schedule", cost.schedule,
                       "Cost config (default: ophtho2019.cfg)");
  cost_cmd->add_option("--budget-money", cost.budget_money,
                       "Money budget in dollars");
  cost_cmd->add_option("--budget-time", cost.budget_time,
                       "Time budget in interview time units");
  cost_cmd->add_flag("--optimize", cost.optimize,
                     "Report the payoff-maximizing feasible count");
  cost_cmd->add_flag("--worst-case", cost.worst_case,
                     "Budget every application as if interviewed");
  cost_cmd->add_option("-o,--output", cost.output, "Per-q CSV path");
  cost_cmd->add_option("--manifest", manifest_path, "Run manifest path");

  SimulateOptions simulate;
  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "Monte Carlo match curve and escalation");
  simulate_cmd->add_option("-c,--config", simulate.config, "Simulation config")
      ->required();
  simulate_cmd->add_option("--out-dir", simulate.out_dir, "Output directory");
  simulate_cmd->add_option("--seed", simulate.seed, "Override the seed");
  simulate_cmd->add_option("--replicas", simulate.replicas,
                           "Override the replica count");
  simulate_cmd->add_option("--threads", simulate.threads,
                           "Worker threads (0 = all cores)");
  simulate_cmd->add_flag("--worst-case", simulate.worst_case,
                         "Worst-case budget reading for escalation");
  simulate_cmd->add_option("--manifest", manifest_path,
                           "Run manifest path (default: <out-dir>/manifest.json)");

  std::vector<std::string> argv_storage{"resmatch"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& a : argv_storage) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  const ManifestSink sink{manifest_path};
  try {
    if (*match_cmd) {
      RunMatch(match, sink, out, err);
    } else if (*verify_cmd) {
      RunVerify(verify, sink, out, err);
    } else if (*payoff_cmd) {
      RunPayoff(payoff, sink, out, err);
    } else if (*cost_cmd) {
      RunCost(cost, sink, out, err);
    } else if (*simulate_cmd) {
      RunSimulate(simulate, manifest_path, out, err);
    }
  } catch (const Error& e) {
    err << "resmatch: " << ErrorKindName(e.kind()) << ": " << e.what() << '\n';
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    err << "resmatch: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace resmatch
