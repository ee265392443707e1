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

// Plain-text key = value configuration files and the typed loaders built on
// them (cost model, payoff spec, simulation).
//
//   # comment
//   interview_prob = 1/7
//   fee_tier = 1-10 flat 60.00      (repeatable keys keep their order)
//
// Unknown keys are rejected with their location.

#ifndef RESMATCH_CONFIG_H_
#define RESMATCH_CONFIG_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "resmatch/cost_model.h"
#include "resmatch/payoff.h"
#include "resmatch/simulator.h"

namespace resmatch {

class KeyValueConfig {
 public:
  static KeyValueConfig Parse(std::istream& in, const std::string& source);
  static KeyValueConfig Load(const std::filesystem::path& path);

  bool Has(const std::string& key) const;
  // Last value of a key.
  std::optional<std::string> Find(const std::string& key) const;
  std::vector<std::string> FindAll(const std::string& key) const;
  std::vector<std::string> Keys() const;

  std::string GetString(const std::string& key) const;
  int GetInt(const std::string& key) const;
  int GetInt(const std::string& key, int fallback) const;
  double GetDouble(const std::string& key) const;
  double GetDouble(const std::string& key, double fallback) const;
  // Accepts decimals and fractions ("0.25", "1/7").
  double GetFraction(const std::string& key) const;
  // Dollars with at most two decimals, parsed exactly.
  Money GetMoney(const std::string& key) const;
  uint64_t GetUint64(const std::string& key) const;

  // "file:line" of the last occurrence of `key`.
  std::string LocationOf(const std::string& key) const;
  const std::string& source() const { return source_; }

  // Throws kValidation for any key not accepted by `allowed`.
  template <typename Pred>
  void RejectUnknown(Pred allowed) const {
    for (const Entry& e : entries_) {
      if (!allowed(e.key)) {
        throw Error(ErrorKind::kValidation,
                    e.location + ": unknown key '" + e.key + "'");
      }
    }
  }

  // Canonical "key = value" text, one entry per line in file order.
  std::string Snapshot() const;

 private:
  struct Entry {
    std::string key;
    std::string value;
    std::string location;
  };
  const Entry& Require(const std::string& key) const;

  std::string source_;
  std::vector<Entry> entries_;
};

// Values parsed from text. Throw kParse with `where` in the message.
Money ParseMoney(const std::string& text, const std::string& where);
double ParseFraction(const std::string& text, const std::string& where);

struct CostConfig {
  CostSpec spec;
  Budget budget;
  int programs = 0;  // default q_max
};

CostConfig LoadCostConfig(const KeyValueConfig& config);
CostConfig LoadCostConfig(const std::filesystem::path& path);

PayoffSpec LoadPayoffSpec(const KeyValueConfig& config);
PayoffSpec LoadPayoffSpec(const std::filesystem::path& path);

struct SimulationConfig {
  SimConfig sim;
  int escalation_rounds = 0;
  std::optional<std::filesystem::path> cost_config;  // resolved path
};

// Relative cost_config paths resolve against the file's directory first,
// then `config_dir`.
SimulationConfig LoadSimulationConfig(
    const std::filesystem::path& path,
    const std::optional<std::filesystem::path>& config_dir = std::nullopt);

// $RESMATCH_CONFIG_DIR when set, otherwise the directory shipped with the
// source tree.
std::filesystem::path DefaultConfigDir();

}  // namespace resmatch

#endif  // RESMATCH_CONFIG_H_
