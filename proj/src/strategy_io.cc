// Copyright 2026 The Soundlab Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "soundlab/strategy_io.h"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "soundlab/error.h"
#include "soundlab/games.h"

namespace soundlab {
namespace {

std::string Trim(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

double ParseNumber(const std::string& text, const std::string& what) {
  size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw ParseError("bad number '" + text + "' in " + what);
  }
  return x;
}

std::vector<double> ParseList(const std::string& text, char sep,
                              const std::string& what) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(ParseNumber(Trim(item), what));
  if (out.empty()) throw ParseError("empty probability list in " + what);
  return out;
}

uint64_t ParseUnsigned(const std::string& text, const std::string& what) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw ParseError("bad integer '" + text + "' in " + what);
  }
  return std::stoull(text);
}

// RFC 4180 rows; quoted fields may hold separators, quotes and newlines.
std::vector<std::vector<std::string>> ParseCsv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c != '"') {
        field += c;
      } else if (i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else {
        quoted = false;
      }
    } else if (c == '"') {
      quoted = any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw ParseError("unterminated quoted CSV field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string Quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

void CheckHeader(const std::vector<std::vector<std::string>>& rows,
                 const std::vector<std::string>& header,
                 const std::string& what) {
  if (rows.empty() || rows[0] != header) {
    throw ParseError(what + ": missing or wrong header");
  }
}

}  // namespace

std::string FormatDouble(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  std::string out = buf;
  if (out.find_first_of(".eni") == std::string::npos) out += ".0";
  return out;
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw ParseError("cannot write " + path);
}

StrategyFile ParseStrategy(const std::string& text, const Game& game,
                           const GameTree& tree) {
  std::optional<Player> declared;
  std::vector<std::pair<std::string, std::vector<double>>> entries;
  std::stringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string where = "strategy line " + std::to_string(number);
    if (Trim(line).empty() || Trim(line)[0] == '#') continue;
    const size_t eq = line.rfind('=');
    if (eq == std::string::npos) throw ParseError("missing '=' on " + where);
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    if (key == "player") {
      if (value != "1" && value != "2") throw ParseError("player must be 1 or 2");
      declared = value == "1" ? kPlayer1 : kPlayer2;
      continue;
    }
    entries.push_back({ResolveInfoStateKey(game, key), ParseList(value, ',', where)});
  }
  // A key decides the owner unless both players have an infostate of that
  // name.
  std::optional<Player> inferred;
  for (const auto& [key, probs] : entries) {
    const bool in1 = tree.FindInfoset(kPlayer1, key).has_value();
    const bool in2 = tree.FindInfoset(kPlayer2, key).has_value();
    if (!in1 && !in2) throw RangeError("not an acting infostate: " + key);
    if (in1 != in2) {
      const Player p = in1 ? kPlayer1 : kPlayer2;
      if (inferred && *inferred != p) {
        throw RangeError("strategy file mixes infostates of both players");
      }
      inferred = p;
    }
  }
  StrategyFile file;
  if (declared && inferred && *declared != *inferred) {
    throw RangeError("declared player does not own the listed infostates");
  }
  if (!declared && !inferred && !entries.empty()) {
    throw RangeError("ambiguous owner; add a player=1 or player=2 line");
  }
  file.player = declared ? *declared : inferred.value_or(kPlayer1);
  for (auto& [key, probs] : entries) {
    const auto index = tree.FindInfoset(file.player, key);
    if (!index) throw RangeError("not an infostate of the player: " + key);
    if (static_cast<int>(probs.size()) != tree.infoset(file.player, *index).num_actions) {
      throw RangeError("wrong number of probabilities at " + key);
    }
    file.strategy.Set(key, std::move(probs));
  }
  return file;
}

StrategyFile ReadStrategyFile(const std::string& path, const Game& game,
                              const GameTree& tree) {
  return ParseStrategy(ReadTextFile(path), game, tree);
}

std::string FormatStrategy(Player player, const BehavioralStrategy& strategy) {
  std::string out = "player=" + std::to_string(player + 1) + "\n";
  for (const auto& [key, probs] : strategy) {
    out += key + "=";
    for (size_t a = 0; a < probs.size(); ++a) {
      out += (a ? "," : "") + FormatDouble(probs[a]);
    }
    out += "\n";
  }
  return out;
}

std::string RecordsCsv(const std::vector<RepeatedGameRecord>& records) {
  std::string out = "seed,match_index,reward_p1\n";
  for (const RepeatedGameRecord& r : records) {
    for (size_t m = 0; m < r.matches.size(); ++m) {
      out += std::to_string(r.seed) + "," + std::to_string(m) + "," +
             FormatDouble(r.matches[m].reward1) + "\n";
    }
  }
  return out;
}

std::string QueriesCsv(const std::vector<RepeatedGameRecord>& records) {
  std::string out = "seed,match_index,player,infoset,policy\n";
  for (const RepeatedGameRecord& r : records) {
    for (size_t m = 0; m < r.matches.size(); ++m) {
      for (const QueryRecord& q : r.matches[m].queries) {
        out += std::to_string(r.seed) + "," + std::to_string(m) + "," +
               std::to_string(q.player + 1) + "," + Quote(q.infoset) + ",";
        for (size_t a = 0; a < q.policy.size(); ++a) {
          out += (a ? ";" : "") + FormatDouble(q.policy[a]);
        }
        out += "\n";
      }
    }
  }
  return out;
}

void WriteRecords(const std::string& path,
                  const std::vector<RepeatedGameRecord>& records) {
  WriteTextFile(path, RecordsCsv(records));
  WriteTextFile(path + ".queries.csv", QueriesCsv(records));
}

std::vector<RepeatedGameRecord> ParseRecords(
    const std::string& rewards_csv,
    const std::optional<std::string>& queries_csv) {
  std::vector<RepeatedGameRecord> records;
  std::map<uint64_t, size_t> index;
  const auto rows = ParseCsv(rewards_csv);
  CheckHeader(rows, {"seed", "match_index", "reward_p1"}, "records");
  for (size_t i = 1; i < rows.size(); ++i) {
    const std::string where = "records row " + std::to_string(i);
    if (rows[i].size() != 3) throw ParseError("expected 3 fields in " + where);
    const uint64_t seed = ParseUnsigned(rows[i][0], where);
    const uint64_t match = ParseUnsigned(rows[i][1], where);
    auto [it, fresh] = index.emplace(seed, records.size());
    if (fresh) records.push_back({seed, {}});
    RepeatedGameRecord& r = records[it->second];
    if (match != r.matches.size()) {
      throw ParseError("match indices of seed " + rows[i][0] +
                       " are not consecutive from 0 (" + where + ")");
    }
    r.matches.emplace_back();
    r.matches.back().reward1 = ParseNumber(rows[i][2], where);
  }
  if (!queries_csv) return records;
  const auto qrows = ParseCsv(*queries_csv);
  CheckHeader(qrows, {"seed", "match_index", "player", "infoset", "policy"},
              "queries");
  for (size_t i = 1; i < qrows.size(); ++i) {
    const std::string where = "queries row " + std::to_string(i);
    const auto& row = qrows[i];
    if (row.size() != 5) throw ParseError("expected 5 fields in " + where);
    const auto it = index.find(ParseUnsigned(row[0], where));
    const uint64_t match = ParseUnsigned(row[1], where);
    if (it == index.end() || match >= records[it->second].matches.size()) {
      throw ParseError("query for an unlogged match in " + where);
    }
    if (row[2] != "1" && row[2] != "2") throw ParseError("bad player in " + where);
    records[it->second].matches[match].queries.push_back(
        {row[2] == "1" ? kPlayer1 : kPlayer2, row[3], ParseList(row[4], ';', where)});
  }
  return records;
}

std::vector<RepeatedGameRecord> ReadRecords(const std::string& path) {
  std::optional<std::string> queries;
  if (std::ifstream(path + ".queries.csv")) {
    queries = ReadTextFile(path + ".queries.csv");
  }
  return ParseRecords(ReadTextFile(path), queries);
}

}  // namespace soundlab
