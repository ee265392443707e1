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

#ifndef RESMATCH_CLI_H_
#define RESMATCH_CLI_H_

#include <iosfwd>
#include <span>
#include <string>

namespace resmatch {

inline constexpr char kToolVersion[] = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitParse = 2,
  kExitValidation = 3,
  kExitGuardLimit = 4,
  kExitInternal = 5,
  kExitIo = 6,
};

// Runs the command-line tool. `args` excludes the program name.
//
//   match     run an engine and write the matching CSV (and a trace)
//   verify    list blocking pairs of a matching
//   payoff    rank/not-rank payoff table and dominance verdict
//   cost      per-q application cost table and optimizer
//   simulate  Monte Carlo match curve and escalation dynamics
int RunCli(std::span<const std::string> args, std::ostream& out,
           std::ostream& err);

}  // namespace resmatch

#endif  // RESMATCH_CLI_H_
