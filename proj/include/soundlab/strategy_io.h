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


#ifndef SOUNDLAB_STRATEGY_IO_H_
#define SOUNDLAB_STRATEGY_IO_H_

#include <optional>
#include <string>
#include <vector>

#include "soundlab/arena.h"
#include "soundlab/fosg.h"
#include "soundlab/game_tree.h"

namespace soundlab {

// Strategy files: one `key=p1,p2,...` line per infostate, split at the last
// '=' since canonical keys may contain one. Keys may be name aliases. An
// optional `player=1` or `player=2` line fixes the owner; otherwise it is
// inferred from the keys. Blank lines and lines starting with '#' are
// skipped.
struct StrategyFile {
  Player player = kPlayer1;
  BehavioralStrategy strategy;
};

// Throws ParseError, RangeError.
StrategyFile ParseStrategy(const std::string& text, const Game& game,
                           const GameTree& tree);
StrategyFile ReadStrategyFile(const std::string& path, const Game& game,
                              const GameTree& tree);
std::string FormatStrategy(Player player, const BehavioralStrategy& strategy);
void WriteTextFile(const std::string& path, const std::string& text);
std::string ReadTextFile(const std::string& path);

// Match rewards as `seed,match_index,reward_p1`. Queries go to the companion
// `<path>.queries.csv` as `seed,match_index,player,infoset,policy` with the
// key quoted and the policy ';'-separated.
std::string RecordsCsv(const std::vector<RepeatedGameRecord>& records);
std::string QueriesCsv(const std::vector<RepeatedGameRecord>& records);
void WriteRecords(const std::string& path,
                  const std::vector<RepeatedGameRecord>& records);
// Reads the rewards and, when present, the query companion. Throws
// ParseError.
std::vector<RepeatedGameRecord> ParseRecords(
    const std::string& rewards_csv,
    const std::optional<std::string>& queries_csv);
std::vector<RepeatedGameRecord> ReadRecords(const std::string& path);

// 17 significant digits; integral values keep a trailing ".0".
std::string FormatDouble(double x);

}  // namespace soundlab

#endif  // SOUNDLAB_STRATEGY_IO_H_
