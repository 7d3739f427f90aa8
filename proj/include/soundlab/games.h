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

#ifndef SOUNDLAB_GAMES_H_
#define SOUNDLAB_GAMES_H_

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "soundlab/fosg.h"

namespace soundlab {

// A game stored as explicit per-world tables. All bundled games use it.
class TabularGame : public Game {
 public:
  struct Successor {
    WorldId next;
    double probability;
    Observation observation;
  };

  explicit TabularGame(std::string name) : name_(std::move(name)) {}

  // Adds a world; n1 = n2 = 0 makes it terminal.
  WorldId AddWorld(int n1, int n2,
                   std::vector<std::string> names1 = {},
                   std::vector<std::string> names2 = {});
  void SetTransition(WorldId world, const JointAction& action, double reward1,
                     std::vector<Successor> successors);
  void SetKnownValue(double value) { known_value_ = value; }
  void NameInfoState(const std::string& name, Player player,
                     const std::string& key) {
    names_[name] = {player, key};
  }

  std::string Name() const override { return name_; }
  WorldId InitialWorld() const override { return 0; }
  int NumActions(WorldId world, Player player) const override {
    return worlds_.at(world).num_actions[player];
  }
  std::vector<Outcome> Transition(WorldId world,
                                  const JointAction& action) const override;
  double Reward(WorldId world, const JointAction& action,
                Player player) const override;
  Observation Observe(WorldId prev, const JointAction& action,
                      WorldId next) const override;
  std::string ActionName(WorldId world, Player player,
                         ActionId action) const override;
  std::optional<double> KnownValue() const override { return known_value_; }
  std::map<std::string, std::pair<Player, std::string>> InfoStateNames()
      const override {
    return names_;
  }

 private:
  struct Entry {
    double reward1 = 0.0;
    std::vector<Successor> successors;
  };
  struct WorldData {
    std::array<int, kNumPlayers> num_actions{0, 0};
    std::array<std::vector<std::string>, kNumPlayers> action_names;
    std::vector<Entry> entries;  // Indexed a1 * n2 + a2.
  };
  const Entry& EntryAt(WorldId world, const JointAction& action) const;

  std::string name_;
  std::vector<WorldData> worlds_;
  std::optional<double> known_value_;
  std::map<std::string, std::pair<Player, std::string>> names_;
};

// Action ids shared by the coin games: Heads is action 0.
inline constexpr ActionId kHeads = 0;
inline constexpr ActionId kTails = 1;

// Player 1 picks Heads/Tails, a public fair coin routes player 2 to s1 or
// s2, player 2 picks Heads/Tails. Player 1 wins 1 on a match, loses 1
// otherwise. Infostate names: "p1", "s1", "s2".
std::shared_ptr<const TabularGame> MakeCoordinatedMatchingPennies();

// Three-card Kuhn poker (J, Q, K; ante 1; bet 1). Actions: 0 = pass/fold,
// 1 = bet/call. Player 1 infostates are named by card and betting so far
// ("J", "Jpb", ...), player 2 likewise ("Jp", "Jb", ...).
std::shared_ptr<const TabularGame> MakeKuhnPoker();

// Simultaneous Heads/Tails, player 1 wins on a match.
std::shared_ptr<const TabularGame> MakeMatchingPennies();

// Simultaneous choice from {A, B, C}; every payoff is zero.
std::shared_ptr<const TabularGame> MakeZeroPayoffNfg3x3();

// Single decision maker: L/R, then Y/X. Payoffs L,Y = 1, L,X = 0, R,X = 1,
// R,Y = 0. Player 2 never decides. Names: "top", "afterL", "afterR".
std::shared_ptr<const TabularGame> MakePerfectInfoLxGame();

// Game by CLI name: cmp, kuhn, mp, nfg3x3, lx. Throws UsageError.
std::shared_ptr<const Game> MakeGame(const std::string& name);
std::vector<std::string> GameNames();

// Resolves a name alias or passes a canonical key through unchanged.
std::string ResolveInfoStateKey(const Game& game, const std::string& name_or_key);

// Player 2 strategy of CMP: Heads with probability p at s1 and q at s2.
BehavioralStrategy CmpStrategy(double p, double q);
// Player 1 strategy of CMP: Heads with probability h.
BehavioralStrategy CmpPlayer1Strategy(double h);

// Player 1 equilibrium of Kuhn poker from the one-parameter family, with
// alpha in [0, 1] mapped onto the usual [0, 1/3] bluffing range: bet J with
// alpha/3, call Qpb with alpha/3 + 1/3, bet K with alpha.
BehavioralStrategy KuhnAlphaEquilibrium(double alpha);
// The unique player 2 equilibrium of Kuhn poker.
BehavioralStrategy KuhnPlayer2Equilibrium();

// The player whose equilibria form a one-parameter family, and the map
// from the parameter to a strategy. Defined for cmp and kuhn.
struct AlphaFamily {
  Player player;
  std::function<BehavioralStrategy(double)> strategy;
};
std::optional<AlphaFamily> AlphaFamilyFor(const std::string& game_name);

}  // namespace soundlab

#endif  // SOUNDLAB_GAMES_H_
