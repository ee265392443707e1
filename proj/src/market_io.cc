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

#include "resmatch/market_io.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace resmatch {

namespace {

constexpr std::string_view kMarketHeader =
    "side,id,rank_or_tier,within_tier,counterpart_id";
constexpr std::string_view kMatchingHeader = "applicant,program";

std::string Trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> SplitFields(std::string_view line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    fields.push_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

bool IsSkippable(const std::string& line) {
  return line.empty() || line.front() == '#';
}

int ParseIntField(const std::string& text, const std::string& location,
                  const char* field) {
  int value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    ThrowParse(location + ": field " + field + ": '" + text +
               "' is not an integer");
  }
  return value;
}

}  // namespace

std::string ReadFileContents(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

RawMarket ReadMarketCsv(std::istream& in, const std::string& source) {
  RawMarket raw;
  std::string line;
  int line_number = 0;
  bool seen_record = false;
  while (std::getline(in, line)) {
    ++line_number;
    line = Trim(line);
    if (IsSkippable(line)) continue;
    const std::string location = source + ":" + std::to_string(line_number);
    if (!seen_record && line == kMarketHeader) {
      seen_record = true;
      continue;
    }
    seen_record = true;
    const std::vector<std::string> f = SplitFields(line);
    if (f.size() != 5) {
      ThrowParse(location + ": expected 5 fields (" + std::string(kMarketHeader) +
                 "), found " + std::to_string(f.size()));
    }
    const std::string& side = f[0];
    const std::string& id = f[1];
    if (id.empty()) ThrowParse(location + ": field id is empty");
    if (side == "capacity") {
      if (f[2].empty() || !f[3].empty() || !f[4].empty()) {
        ThrowParse(location +
                   ": capacity rows take the form capacity,<program>,<seats>,,");
      }
      raw.programs.push_back(
          {id, ParseIntField(f[2], location, "rank_or_tier"), location});
      continue;
    }
    if (side != "applicant" && side != "program") {
      ThrowParse(location + ": field side: unknown side '" + side +
                 "' (expected applicant, program or capacity)");
    }
    if (side == "applicant" && f[2].empty() && f[3].empty() && f[4].empty()) {
      raw.applicants.push_back(id);
      continue;
    }
    if (f[2].empty()) ThrowParse(location + ": field rank_or_tier is empty");
    if (f[4].empty()) ThrowParse(location + ": field counterpart_id is empty");
    RawPreferenceEntry entry;
    entry.owner = id;
    entry.rank_or_tier = ParseIntField(f[2], location, "rank_or_tier");
    if (!f[3].empty()) {
      entry.within_tier = ParseIntField(f[3], location, "within_tier");
    }
    entry.counterpart = f[4];
    entry.location = location;
    (side == "applicant" ? raw.applicant_entries : raw.program_entries)
        .push_back(std::move(entry));
  }
  return raw;
}

RawMarket ReadMarketJson(std::istream& in, const std::string& source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    ThrowParse(source + ": " + e.what());
  }
  auto fail = [&](const std::string& where, const std::string& what) {
    ThrowParse(source + ": " + where + ": " + what);
  };
  if (!doc.is_object()) fail("document", "expected an object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "applicants" && key != "programs") {
      fail(key, "unknown top-level key");
    }
  }
  RawMarket raw;
  const nlohmann::json applicants =
      doc.value("applicants", nlohmann::json::object());
  if (!applicants.is_object()) fail("applicants", "expected an object");
  for (const auto& [id, list] : applicants.items()) {
    const std::string where = "applicants." + id;
    if (!list.is_array()) fail(where, "expected an array of program ids");
    raw.applicants.push_back(id);
    for (size_t i = 0; i < list.size(); ++i) {
      if (!list[i].is_string()) fail(where, "entries must be strings");
      raw.applicant_entries.push_back({id, static_cast<int>(i + 1),
                                       std::nullopt,
                                       list[i].get<std::string>(),
                                       source + ": " + where + "[" +
                                           std::to_string(i) + "]"});
    }
  }
  const nlohmann::json programs =
      doc.value("programs", nlohmann::json::object());
  if (!programs.is_object()) fail("programs", "expected an object");
  for (const auto& [id, body] : programs.items()) {
    const std::string where = "programs." + id;
    if (!body.is_object()) fail(where, "expected an object");
    for (const auto& [key, value] : body.items()) {
      if (key != "capacity" && key != "ranking" && key != "tiers") {
        fail(where + "." + key, "unknown key");
      }
    }
    if (!body.contains("capacity") || !body["capacity"].is_number_integer()) {
      fail(where + ".capacity", "expected an integer");
    }
    raw.programs.push_back(
        {id, body["capacity"].get<int64_t>(), source + ": " + where});
    if (body.contains("ranking") && body.contains("tiers")) {
      fail(where, "give either ranking or tiers, not both");
    }
    if (body.contains("ranking")) {
      const auto& list = body["ranking"];
      if (!list.is_array()) fail(where + ".ranking", "expected an array");
      for (size_t i = 0; i < list.size(); ++i) {
        if (!list[i].is_string()) {
          fail(where + ".ranking", "entries must be strings");
        }
        raw.program_entries.push_back(
            {id, static_cast<int>(i + 1), std::nullopt,
             list[i].get<std::string>(),
             source + ": " + where + ".ranking[" + std::to_string(i) + "]"});
      }
    } else if (body.contains("tiers")) {
      const auto& tiers = body["tiers"];
      if (!tiers.is_array()) fail(where + ".tiers", "expected an array");
      for (size_t t = 0; t < tiers.size(); ++t) {
        const std::string tier_where =
            where + ".tiers[" + std::to_string(t) + "]";
        if (!tiers[t].is_array()) fail(tier_where, "expected an array");
        if (tiers[t].empty()) {
          ThrowValidation(source + ": " + tier_where + ": tier " +
                          std::to_string(t + 1) + " is empty");
        }
        for (size_t w = 0; w < tiers[t].size(); ++w) {
          if (!tiers[t][w].is_string()) {
            fail(tier_where, "entries must be strings");
          }
          raw.program_entries.push_back(
              {id, static_cast<int>(t + 1), static_cast<int>(w + 1),
               tiers[t][w].get<std::string>(),
               source + ": " + tier_where + "[" + std::to_string(w) + "]"});
        }
      }
    }
  }
  return raw;
}

MarketInstance ParseMarketFile(const std::filesystem::path& path) {
  std::istringstream in(ReadFileContents(path));
  const std::string source = path.string();
  if (path.extension() == ".json") {
    return ValidateMarket(ReadMarketJson(in, source));
  }
  return ValidateMarket(ReadMarketCsv(in, source));
}

void WriteMarketCsv(std::ostream& out, const MarketInstance& market) {
  out << kMarketHeader << '\n';
  for (int p = 0; p < market.program_count(); ++p) {
    out << "capacity," << market.program_name(ProgramId(p)) << ','
        << market.capacity(ProgramId(p)) << ",,\n";
  }
  for (int a = 0; a < market.applicant_count(); ++a) {
    const std::string& name = market.applicant_name(ApplicantId(a));
    const auto& list = market.applicant_prefs(ApplicantId(a));
    if (list.empty()) out << "applicant," << name << ",,,\n";
    for (int r = 1; r <= list.size(); ++r) {
      out << "applicant," << name << ',' << r << ",,"
          << market.program_name(list.AtRank(r)) << '\n';
    }
  }
  for (int p = 0; p < market.program_count(); ++p) {
    const std::string& name = market.program_name(ProgramId(p));
    const ProgramPreferences& prefs = market.program_prefs(ProgramId(p));
    if (const auto* tiered = std::get_if<TieredPreferenceList>(&prefs)) {
      for (int t = 1; t <= tiered->tier_count(); ++t) {
        const auto tier = tiered->tier(t);
        for (size_t w = 0; w < tier.size(); ++w) {
          out << "program," << name << ',' << t << ',' << w + 1 << ','
              << market.applicant_name(tier[w]) << '\n';
        }
      }
    } else {
      const auto& list = std::get<PreferenceList<ApplicantId>>(prefs);
      for (int r = 1; r <= list.size(); ++r) {
        out << "program," << name << ',' << r << ",,"
            << market.applicant_name(list.AtRank(r)) << '\n';
      }
    }
  }
}

void WriteMarketJson(std::ostream& out, const MarketInstance& market) {
  nlohmann::ordered_json doc;
  doc["applicants"] = nlohmann::ordered_json::object();
  for (int a = 0; a < market.applicant_count(); ++a) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const ProgramId p : market.applicant_prefs(ApplicantId(a)).order()) {
      list.push_back(market.program_name(p));
    }
    doc["applicants"][market.applicant_name(ApplicantId(a))] = list;
  }
  doc["programs"] = nlohmann::ordered_json::object();
  for (int p = 0; p < market.program_count(); ++p) {
    nlohmann::ordered_json body;
    body["capacity"] = market.capacity(ProgramId(p));
    const ProgramPreferences& prefs = market.program_prefs(ProgramId(p));
    if (const auto* tiered = std::get_if<TieredPreferenceList>(&prefs)) {
      body["tiers"] = nlohmann::ordered_json::array();
      for (int t = 1; t <= tiered->tier_count(); ++t) {
        nlohmann::ordered_json tier = nlohmann::ordered_json::array();
        for (const ApplicantId a : tiered->tier(t)) {
          tier.push_back(market.applicant_name(a));
        }
        body["tiers"].push_back(tier);
      }
    } else {
      body["ranking"] = nlohmann::ordered_json::array();
      for (const ApplicantId a : FlatOrder(prefs).order()) {
        body["ranking"].push_back(market.applicant_name(a));
      }
    }
    doc["programs"][market.program_name(ProgramId(p))] = body;
  }
  out << doc.dump(2) << '\n';
}

Matching ReadMatchingCsv(std::istream& in, const MarketInstance& market,
                         const std::string& source) {
  std::vector<std::optional<ProgramId>> assignment(market.applicant_count());
  std::vector<bool> seen(market.applicant_count(), false);
  std::string line;
  int line_number = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_number;
    line = Trim(line);
    if (IsSkippable(line)) continue;
    const std::string location = source + ":" + std::to_string(line_number);
    if (!header) {
      if (line != kMatchingHeader) {
        ThrowParse(location + ": expected header '" +
                   std::string(kMatchingHeader) + "'");
      }
      header = true;
      continue;
    }
    const std::vector<std::string> f = SplitFields(line);
    if (f.size() != 2) {
      ThrowParse(location + ": expected 2 fields, found " +
                 std::to_string(f.size()));
    }
    const std::optional<ApplicantId> a = market.FindApplicant(f[0]);
    if (!a) {
      ThrowValidation(location + ": unknown applicant '" + f[0] + "'");
    }
    if (seen[a->value()]) {
      ThrowValidation(location + ": applicant '" + f[0] + "' listed twice");
    }
    seen[a->value()] = true;
    if (f[1].empty()) continue;
    const std::optional<ProgramId> p = market.FindProgram(f[1]);
    if (!p) ThrowValidation(location + ": unknown program '" + f[1] + "'");
    assignment[a->value()] = *p;
  }
  if (!header) ThrowParse(source + ": empty matching file");
  for (int a = 0; a < market.applicant_count(); ++a) {
    if (!seen[a]) {
      ThrowValidation(source + ": applicant '" +
                      market.applicant_name(ApplicantId(a)) + "' is missing");
    }
  }
  return Matching(market, std::move(assignment));
}

void WriteMatchingCsv(std::ostream& out, const MarketInstance& market,
                      const Matching& matching) {
  out << kMatchingHeader << '\n';
  for (int a = 0; a < market.applicant_count(); ++a) {
    out << market.applicant_name(ApplicantId(a)) << ',';
    if (const auto p = matching.ProgramOf(ApplicantId(a))) {
      out << market.program_name(*p);
    }
    out << '\n';
  }
}

std::string TraceEventJson(const MarketInstance& market,
                           const TraceEvent& event) {
  nlohmann::ordered_json j;
  switch (event.kind) {
    case TraceEvent::Kind::kPropose:
      j["event"] = "propose";
      break;
    case TraceEvent::Kind::kHold:
      j["event"] = "hold";
      break;
    case TraceEvent::Kind::kReject:
      j["event"] = "reject";
      break;
    case TraceEvent::Kind::kDisplace:
      j["event"] = "displace";
      break;
    case TraceEvent::Kind::kStep:
      j["event"] = "step";
      break;
    case TraceEvent::Kind::kAssign:
      j["event"] = "assign";
      break;
  }
  const bool proposal = event.kind != TraceEvent::Kind::kStep &&
                        event.kind != TraceEvent::Kind::kAssign;
  if (proposal) {
    j["proposer"] = event.proposer_side == ProposingSide::kApplicants
                        ? "applicant"
                        : "program";
  }
  if (event.applicant) j["applicant"] = market.applicant_name(*event.applicant);
  if (event.program) j["program"] = market.program_name(*event.program);
  if (event.displaced) j["displaced"] = market.applicant_name(*event.displaced);
  if (event.displaced_program) {
    j["displaced"] = market.program_name(*event.displaced_program);
  }
  if (event.step) {
    j["tier"] = event.step->tier;
    j["rank"] = event.step->rank;
  }
  return j.dump();
}

}  // namespace resmatch
