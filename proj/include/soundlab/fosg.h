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

#ifndef SOUNDLAB_FOSG_H_
#define SOUNDLAB_FOSG_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace soundlab {

// Players are 0-based internally; the CLI and file formats use 1 and 2.
using Player = int;
inline constexpr Player kPlayer1 = 0;
inline constexpr Player kPlayer2 = 1;
inline constexpr int kNumPlayers = 2;
constexpr Player Opponent(Player p) { return 1 - p; }

using WorldId = int;
using ActionId = int;
using JointAction = std::array<ActionId, kNumPlayers>;

// Private observation of each player plus the public observation, received
// on a transition.
struct Observation {
  std::array<std::string, kNumPlayers> private_obs;
  std::string public_obs;
};

struct Outcome {
  WorldId world;
  double probability;
};

// A finite two-player zero-sum factored-observation stochastic game.
//
// Worlds and actions are small integer ids owned by the implementation.
// Legal actions of a player at a world are the ids 0..NumActions-1, in that
// order; every probability vector in the library is aligned with it. Both
// players have at least one action at a non-terminal world and none at a
// terminal one. A player with a single action does not decide anything there.
class Game {
 public:
  virtual ~Game() = default;

  virtual std::string Name() const = 0;
  virtual WorldId InitialWorld() const = 0;
  virtual int NumActions(WorldId world, Player player) const = 0;
  virtual std::vector<Outcome> Transition(WorldId world,
                                          const JointAction& action) const = 0;
  virtual double Reward(WorldId world, const JointAction& action,
                        Player player) const = 0;
  virtual Observation Observe(WorldId prev, const JointAction& action,
                              WorldId next) const = 0;
  virtual Observation InitialObservation() const { return {}; }
  virtual std::string ActionName(WorldId world, Player player,
                                 ActionId action) const;

  // Closed-form game value for player 1 when one is known. The value
  // certificate only accepts it if the solver bracket contains it.
  virtual std::optional<double> KnownValue() const { return std::nullopt; }

  // Human-readable aliases of information states, name -> (player, key).
  virtual std::map<std::string, std::pair<Player, std::string>>
  InfoStateNames() const {
    return {};
  }

  bool IsTerminal(WorldId world) const {
    return NumActions(world, kPlayer1) == 0;
  }
  std::vector<ActionId> LegalActions(WorldId world, Player player) const;
};

// A legal trajectory (w0, a0, w1, ..., wt).
struct History {
  std::vector<WorldId> worlds;
  std::vector<JointAction> actions;

  explicit History(WorldId initial) : worlds{initial} {}
  WorldId Last() const { return worlds.back(); }
  int Length() const { return static_cast<int>(actions.size()); }
  void Append(const JointAction& action, WorldId next) {
    actions.push_back(action);
    worlds.push_back(next);
  }
  bool operator==(const History&) const = default;
};

// A player's action-observation sequence (O0, a0, O1, a1, ..., Ot).
//
// The canonical key is a length-prefixed encoding "<len>:<bytes>" of every
// element in order (private and public observation parts are separate
// tokens), so it is injective and a key is a prefix of the key of every
// extension of the sequence.
class InfoState {
 public:
  InfoState(Player player, const Observation& initial);

  // Appends the player's own action a^t followed by observation O^{t+1}.
  void Extend(ActionId own_action, const Observation& next);

  Player player() const { return player_; }
  const std::string& key() const { return key_; }
  const std::vector<ActionId>& actions() const { return actions_; }
  const std::vector<std::pair<std::string, std::string>>& observations()
      const {
    return observations_;
  }
  bool IsPrefixOf(const InfoState& other) const;

 private:
  void AppendObservation(const Observation& obs);

  Player player_;
  std::vector<std::pair<std::string, std::string>> observations_;
  std::vector<ActionId> actions_;
  std::string key_;
};

// Maps infostate keys to probability vectors over the legal actions.
class BehavioralStrategy {
 public:
  using Table = std::map<std::string, std::vector<double>>;

  BehavioralStrategy() = default;

  // Rejects negative entries and sums more than 1e-9 away from one, then
  // renormalizes.
  void Set(const std::string& key, std::vector<double> probs);
  bool Contains(const std::string& key) const {
    return table_.count(key) > 0;
  }
  const std::vector<double>* Find(const std::string& key) const;
  // Throws MissingStrategyError.
  const std::vector<double>& At(const std::string& key) const;
  void Erase(const std::string& key) { table_.erase(key); }

  const Table& table() const { return table_; }
  size_t size() const { return table_.size(); }
  bool empty() const { return table_.empty(); }
  Table::const_iterator begin() const { return table_.begin(); }
  Table::const_iterator end() const { return table_.end(); }

  bool operator==(const BehavioralStrategy&) const = default;

 private:
  Table table_;
};

using StrategyProfile = std::array<BehavioralStrategy, kNumPlayers>;

struct ReachProbs {
  std::array<double, kNumPlayers> player{1.0, 1.0};
  double chance = 1.0;

  double Total() const { return player[0] * player[1] * chance; }
};

// Terminal histories in depth-first order (joint actions in lexicographic
// order, outcomes in the order the game lists them). Throws
// BudgetExceededError once more than `budget` histories have been visited.
std::vector<History> EnumerateTerminals(const Game& game,
                                        int64_t budget = 1'000'000);

InfoState InfoStateOf(const Game& game, const History& history, Player player);

// Cumulative reward of `player` along the history.
double CumulativeReward(const Game& game, const History& history,
                        Player player);

ReachProbs ReachProbabilities(const Game& game, const StrategyProfile& profile,
                              const History& history);

// Sum over terminals of reach times utility.
double ExpectedUtility(const Game& game, const StrategyProfile& profile,
                       Player player = kPlayer1);

// max_z u1(z) - min_z u1(z).
double UtilityRange(const Game& game, int64_t budget = 1'000'000);

}  // namespace soundlab

#endif  // SOUNDLAB_FOSG_H_
