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

#include "resmatch/config.h"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <limits>
#include <istream>
#include <sstream>

#include "resmatch/market_io.h"

#ifndef RESMATCH_DEFAULT_CONFIG_DIR
#define RESMATCH_DEFAULT_CONFIG_DIR "config"
#endif

namespace resmatch {

namespace {

std::string Trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

template <typename T>
T ParseNumber(const std::string& text, const std::string& where) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    ThrowParse(where + ": '" + text + "' is not a valid number");
  }
  return value;
}

std::vector<std::string> SplitWords(const std::string& text) {
  std::string spaced = text;
  for (char& c : spaced) {
    if (c == ',') c = ' ';
  }
  std::istringstream in(spaced);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

}  // namespace

Money ParseMoney(const std::string& text, const std::string& where) {
  std::string s = text;
  bool negative = false;
  if (!s.empty() && s.front() == '-') {
    negative = true;
    s.erase(0, 1);
  }
  if (!s.empty() && s.front() == '$') s.erase(0, 1);
  std::string digits;
  for (const char c : s) {
    if (c != '_') digits += c;
  }
  const auto dot = digits.find('.');
  const std::string whole = digits.substr(0, dot);
  std::string frac = dot == std::string::npos ? "" : digits.substr(dot + 1);
  const auto all_digits = [](const std::string& t) {
    return std::all_of(t.begin(), t.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
  };
  if (whole.empty() || frac.size() > 2 || !all_digits(whole) ||
      !all_digits(frac)) {
    ThrowParse(where + ": '" + text +
               "' is not a money amount (dollars, at most two decimals)");
  }
  while (frac.size() < 2) frac += '0';
  const int64_t dollars = ParseNumber<int64_t>(whole, where);
  const int64_t cents = ParseNumber<int64_t>(frac, where);
  const int64_t total = dollars * 100 + cents;
  return Money::FromCents(negative ? -total : total);
}

double ParseFraction(const std::string& text, const std::string& where) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return ParseNumber<double>(text, where);
  const double num = ParseNumber<double>(Trim(text.substr(0, slash)), where);
  const double den = ParseNumber<double>(Trim(text.substr(slash + 1)), where);
  if (den == 0) ThrowParse(where + ": zero denominator in '" + text + "'");
  return num / den;
}

KeyValueConfig KeyValueConfig::Parse(std::istream& in,
                                     const std::string& source) {
  KeyValueConfig config;
  config.source_ = source;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const std::string location = source + ":" + std::to_string(line_number);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      ThrowParse(location + ": expected 'key = value'");
    }
    Entry entry{Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)), location};
    if (entry.key.empty()) ThrowParse(location + ": empty key");
    config.entries_.push_back(std::move(entry));
  }
  return config;
}

KeyValueConfig KeyValueConfig::Load(const std::filesystem::path& path) {
  std::istringstream in(ReadFileContents(path));
  return Parse(in, path.string());
}

bool KeyValueConfig::Has(const std::string& key) const {
  return Find(key).has_value();
}

std::optional<std::string> KeyValueConfig::Find(const std::string& key) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->key == key) return it->value;
  }
  return std::nullopt;
}

std::vector<std::string> KeyValueConfig::FindAll(const std::string& key) const {
  std::vector<std::string> values;
  for (const Entry& e : entries_) {
    if (e.key == key) values.push_back(e.value);
  }
  return values;
}

std::vector<std::string> KeyValueConfig::Keys() const {
  std::vector<std::string> keys;
  for (const Entry& e : entries_) keys.push_back(e.key);
  return keys;
}

const KeyValueConfig::Entry& KeyValueConfig::Require(
    const std::string& key) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->key == key) return *it;
  }
  throw Error(ErrorKind::kValidation,
              source_ + ": missing required key '" + key + "'");
}

std::string KeyValueConfig::LocationOf(const std::string& key) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->key == key) return it->location;
  }
  return source_;
}

std::string KeyValueConfig::GetString(const std::string& key) const {
  return Require(key).value;
}

int KeyValueConfig::GetInt(const std::string& key) const {
  const Entry& e = Require(key);
  return ParseNumber<int>(e.value, e.location + ": " + key);
}

int KeyValueConfig::GetInt(const std::string& key, int fallback) const {
  return Has(key) ? GetInt(key) : fallback;
}

double KeyValueConfig::GetDouble(const std::string& key) const {
  const Entry& e = Require(key);
  return ParseNumber<double>(e.value, e.location + ": " + key);
}

double KeyValueConfig::GetDouble(const std::string& key,
                                 double fallback) const {
  return Has(key) ? GetDouble(key) : fallback;
}

double KeyValueConfig::GetFraction(const std::string& key) const {
  const Entry& e = Require(key);
  return ParseFraction(e.value, e.location + ": " + key);
}

Money KeyValueConfig::GetMoney(const std::string& key) const {
  const Entry& e = Require(key);
  return ParseMoney(e.value, e.location + ": " + key);
}

uint64_t KeyValueConfig::GetUint64(const std::string& key) const {
  const Entry& e = Require(key);
  return ParseNumber<uint64_t>(e.value, e.location + ": " + key);
}

std::string KeyValueConfig::Snapshot() const {
  std::string out;
  for (const Entry& e : entries_) out += e.key + " = " + e.value + "\n";
  return out;
}

namespace {

constexpr const char* kTermKeys[] = {"interview_prob", "interview_cost",
                                     "interview_time", "payoff_if_interviewed",
                                     "payoff_if_rejected"};

FeeTier ParseFeeTier(const std::string& text, const std::string& where) {
  const std::vector<std::string> words = SplitWords(text);
  if (words.size() != 3) {
    ThrowParse(where + ": fee_tier takes '<first>-<last>|<first>+ "
                       "flat|each <dollars>', got '" + text + "'");
  }
  FeeTier tier;
  const std::string& range = words[0];
  if (!range.empty() && range.back() == '+') {
    tier.first = ParseNumber<int>(range.substr(0, range.size() - 1), where);
  } else {
    const auto dash = range.find('-');
    if (dash == std::string::npos) {
      ThrowParse(where + ": fee tier range '" + range +
                 "' must look like 11-40 or 41+");
    }
    tier.first = ParseNumber<int>(range.substr(0, dash), where);
    tier.last = ParseNumber<int>(range.substr(dash + 1), where);
  }
  if (words[1] == "flat") {
    tier.kind = FeeTier::Kind::kFlat;
  } else if (words[1] == "each") {
    tier.kind = FeeTier::Kind::kPerApplication;
  } else {
    ThrowParse(where + ": fee tier kind must be 'flat' or 'each', got '" +
               words[1] + "'");
  }
  tier.fee = ParseMoney(words[2], where);
  return tier;
}

void ApplyTerm(ProgramTerms& terms, const std::string& field,
               const std::string& value, const std::string& where) {
  if (field == "interview_prob") {
    terms.interview_prob = ParseFraction(value, where);
  } else if (field == "interview_cost") {
    terms.interview_cost = ParseMoney(value, where);
  } else if (field == "interview_time") {
    terms.interview_time = ParseFraction(value, where);
  } else if (field == "payoff_if_interviewed") {
    terms.payoff_if_interviewed = ParseMoney(value, where);
  } else if (field == "payoff_if_rejected") {
    terms.payoff_if_rejected = ParseMoney(value, where);
  } else {
    ThrowValidation(where + ": unknown program term '" + field + "'");
  }
}

bool IsTermKey(const std::string& key) {
  for (const char* k : kTermKeys) {
    if (key == k) return true;
  }
  return false;
}

}  // namespace

CostConfig LoadCostConfig(const KeyValueConfig& config) {
  config.RejectUnknown([](const std::string& key) {
    return key == "fee_tier" || key == "budget_money" ||
           key == "budget_time" || key == "programs" || IsTermKey(key) ||
           key.rfind("override.", 0) == 0;
  });
  CostConfig out;
  std::vector<FeeTier> tiers;
  for (const std::string& text : config.FindAll("fee_tier")) {
    tiers.push_back(ParseFeeTier(text, config.source() + ": fee_tier"));
  }
  out.spec.fees = FeeSchedule(std::move(tiers));
  for (const char* key : kTermKeys) {
    ApplyTerm(out.spec.terms, key, config.GetString(key),
              config.LocationOf(key));
  }
  for (const std::string& key : config.Keys()) {
    if (key.rfind("override.", 0) != 0) continue;
    const std::string rest = key.substr(9);
    const auto dot = rest.find('.');
    const std::string where = config.LocationOf(key);
    if (dot == std::string::npos) {
      ThrowParse(where + ": override keys look like override.<n>.<term>");
    }
    const int application = ParseNumber<int>(rest.substr(0, dot), where);
    auto [it, inserted] =
        out.spec.overrides.try_emplace(application, out.spec.terms);
    ApplyTerm(it->second, rest.substr(dot + 1), *config.Find(key), where);
  }
  out.spec.Validate();
  out.budget.money = config.Has("budget_money")
                         ? config.GetMoney("budget_money")
                         : Money::FromCents(std::numeric_limits<int64_t>::max() / 4);
  out.budget.time = config.Has("budget_time")
                        ? config.GetDouble("budget_time")
                        : std::numeric_limits<double>::infinity();
  if (out.budget.money < Money() || out.budget.time < 0) {
    ThrowValidation(config.source() + ": budgets must be non-negative");
  }
  out.programs = config.GetInt("programs", 0);
  if (out.programs < 0) {
    ThrowValidation(config.LocationOf("programs") +
                    ": programs must be non-negative");
  }
  return out;
}

CostConfig LoadCostConfig(const std::filesystem::path& path) {
  return LoadCostConfig(KeyValueConfig::Load(path));
}

namespace {

PayoffFunction LoadPayoffFunction(const KeyValueConfig& config,
                                  const std::string& side) {
  auto table = [&](const std::string& name) {
    std::vector<double> values;
    const std::string key = side + "." + name;
    if (const auto text = config.Find(key)) {
      for (const std::string& word : SplitWords(*text)) {
        values.push_back(ParseFraction(word, config.LocationOf(key)));
      }
    }
    return values;
  };
  auto tail = [&](const std::string& name) {
    const std::string key = side + "." + name;
    return config.Has(key) ? config.GetFraction(key) : 0.0;
  };
  try {
    return PayoffFunction(table("matched"), tail("matched_tail"),
                          table("unmatched"), tail("unmatched_tail"));
  } catch (const Error& e) {
    throw Error(e.kind(), config.source() + ": " + side + " payoff: " +
                              e.what());
  }
}

}  // namespace

PayoffSpec LoadPayoffSpec(const KeyValueConfig& config) {
  config.RejectUnknown([](const std::string& key) {
    for (const char* side : {"applicant.", "program."}) {
      for (const char* name :
           {"matched", "matched_tail", "unmatched", "unmatched_tail"}) {
        if (key == std::string(side) + name) return true;
      }
    }
    return false;
  });
  return {LoadPayoffFunction(config, "applicant"),
          LoadPayoffFunction(config, "program")};
}

PayoffSpec LoadPayoffSpec(const std::filesystem::path& path) {
  return LoadPayoffSpec(KeyValueConfig::Load(path));
}

SimulationConfig LoadSimulationConfig(
    const std::filesystem::path& path,
    const std::optional<std::filesystem::path>& config_dir) {
  const KeyValueConfig config = KeyValueConfig::Load(path);
  config.RejectUnknown([](const std::string& key) {
    for (const char* k :
         {"applicants", "programs", "capacity_min", "capacity_max",
          "applications", "screening", "interview_prob", "top_k",
          "correlation", "replicas", "seed", "threads", "escalation_rounds",
          "cost_config"}) {
      if (key == k) return true;
    }
    return false;
  });
  SimulationConfig out;
  SimConfig& sim = out.sim;
  sim.applicants = config.GetInt("applicants", sim.applicants);
  sim.programs = config.GetInt("programs", sim.programs);
  sim.capacity_min = config.GetInt("capacity_min", sim.capacity_min);
  sim.capacity_max = config.GetInt("capacity_max", sim.capacity_max);
  sim.applications = config.GetInt("applications", sim.programs);
  if (const auto rule = config.Find("screening")) {
    if (*rule == "probability") {
      sim.screening = ScreeningRule::kProbability;
    } else if (*rule == "top_k") {
      sim.screening = ScreeningRule::kTopK;
    } else {
      ThrowValidation(config.LocationOf("screening") +
                      ": screening must be 'probability' or 'top_k'");
    }
  }
  if (config.Has("interview_prob")) {
    sim.interview_prob = config.GetFraction("interview_prob");
  }
  sim.top_k = config.GetInt("top_k", sim.top_k);
  if (config.Has("correlation")) sim.correlation = config.GetFraction("correlation");
  sim.replicas = config.GetInt("replicas", sim.replicas);
  if (config.Has("seed")) sim.seed = config.GetUint64("seed");
  sim.threads = config.GetInt("threads", sim.threads);
  out.escalation_rounds = config.GetInt("escalation_rounds", 0);
  if (out.escalation_rounds < 0) {
    ThrowValidation(config.LocationOf("escalation_rounds") +
                    ": escalation_rounds must be non-negative");
  }
  if (const auto cost = config.Find("cost_config")) {
    std::filesystem::path candidate = *cost;
    if (candidate.is_relative()) {
      const auto beside = path.parent_path() / candidate;
      if (std::filesystem::exists(beside)) {
        candidate = beside;
      } else {
        candidate = config_dir.value_or(DefaultConfigDir()) / candidate;
      }
    }
    out.cost_config = candidate;
  }
  if (out.escalation_rounds > 0 && !out.cost_config) {
    ThrowValidation(config.source() +
                    ": escalation_rounds needs a cost_config");
  }
  try {
    sim.Validate();
  } catch (const Error& e) {
    throw Error(e.kind(), config.source() + ": " + e.what());
  }
  return out;
}

std::filesystem::path DefaultConfigDir() {
  if (const char* dir = std::getenv("RESMATCH_CONFIG_DIR"); dir && *dir) {
    return dir;
  }
  return RESMATCH_DEFAULT_CONFIG_DIR;
}

}  // namespace resmatch
