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

#ifndef SOUNDLAB_ONLINE_H_
#define SOUNDLAB_ONLINE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "soundlab/fosg.h"
#include "soundlab/game_tree.h"
#include "soundlab/rng.h"
#include "soundlab/solvers.h"

namespace soundlab {

// The memory theta of an online algorithm. Opaque to everyone but its owner.
class AlgorithmState {
 public:
  virtual ~AlgorithmState() = default;
  virtual std::unique_ptr<AlgorithmState> Clone() const = 0;
  // Canonical text form; equal strings mean identical future behavior.
  virtual std::string Serialize() const = 0;
};

// A stateful map from an information state and theta to a strategy at that
// state. All randomness enters through the initial state, which is a
// realization drawn from the seed.
class OnlineAlgorithm {
 public:
  using Support = std::vector<std::pair<double, uint64_t>>;

  virtual ~OnlineAlgorithm() = default;

  virtual std::string Name() const = 0;
  virtual std::unique_ptr<AlgorithmState> InitialState(uint64_t seed) const = 0;
  // Distribution over the `num_actions` legal actions at `state`.
  virtual std::vector<double> Act(const InfoState& state, int num_actions,
                                  AlgorithmState& theta) const = 0;
  // Called once per match with the player's terminal information state and
  // its reward for the match.
  virtual void OnMatchEnd(const InfoState& /*terminal*/, double /*reward*/,
                          AlgorithmState& /*theta*/) const {}
  virtual bool IsStateless() const { return false; }
  // Finite distribution of initial states as (probability, seed) pairs, when
  // there is one. Deterministic algorithms have a single atom.
  virtual std::optional<Support> InitialStateSupport() const {
    return std::nullopt;
  }
};

// Theta with nothing in it.
class EmptyState : public AlgorithmState {
 public:
  std::unique_ptr<AlgorithmState> Clone() const override {
    return std::make_unique<EmptyState>();
  }
  std::string Serialize() const override { return ""; }
};

class FixedPlayer : public OnlineAlgorithm {
 public:
  explicit FixedPlayer(BehavioralStrategy strategy, std::string name = "fixed")
      : strategy_(std::move(strategy)), name_(std::move(name)) {}

  std::string Name() const override { return name_; }
  std::unique_ptr<AlgorithmState> InitialState(uint64_t) const override {
    return std::make_unique<EmptyState>();
  }
  // Throws MissingStrategyError for an unknown infostate.
  std::vector<double> Act(const InfoState& state, int num_actions,
                          AlgorithmState& theta) const override;
  bool IsStateless() const override { return true; }
  std::optional<Support> InitialStateSupport() const override {
    return Support{{1.0, 0}};
  }
  const BehavioralStrategy& strategy() const { return strategy_; }

 private:
  BehavioralStrategy strategy_;
  std::string name_;
};

// Remembers its first answer in every infostate: with an empty cache it plays
// action 0 (Heads), on a hit the cached action, on a miss action 1 (Tails).
class PlayCache : public OnlineAlgorithm {
 public:
  class State : public AlgorithmState {
   public:
    std::map<std::string, ActionId> cache;
    std::unique_ptr<AlgorithmState> Clone() const override {
      return std::make_unique<State>(*this);
    }
    std::string Serialize() const override;
  };

  std::string Name() const override { return "playcache"; }
  std::unique_ptr<AlgorithmState> InitialState(uint64_t) const override {
    return std::make_unique<State>();
  }
  std::vector<double> Act(const InfoState& state, int num_actions,
                          AlgorithmState& theta) const override;
  std::optional<Support> InitialStateSupport() const override {
    return Support{{1.0, 0}};
  }
};

// Plays pure action (queries so far) mod num_actions.
class RoundRobinPlayer : public OnlineAlgorithm {
 public:
  class State : public AlgorithmState {
   public:
    int64_t queries = 0;
    std::unique_ptr<AlgorithmState> Clone() const override {
      return std::make_unique<State>(*this);
    }
    std::string Serialize() const override { return std::to_string(queries); }
  };

  std::string Name() const override { return "roundrobin"; }
  std::unique_ptr<AlgorithmState> InitialState(uint64_t) const override {
    return std::make_unique<State>();
  }
  std::vector<double> Act(const InfoState& state, int num_actions,
                          AlgorithmState& theta) const override;
  std::optional<Support> InitialStateSupport() const override {
    return Support{{1.0, 0}};
  }
};

struct OosOptions {
  // Targets are filled in per query; iterations is the per-move budget.
  SolverConfig solver;
  // Keep regrets and averages across queries and matches.
  bool retain = false;
  // Kickstart parameter of the game's equilibrium family per target key.
  // Targets absent from the map are not kickstarted.
  std::map<std::string, double> kickstart_alpha;
};

// Emulates online outcome sampling: at every decision it runs MCCFR biased
// toward the current infostate and plays the average strategy there.
class OosPlayer : public OnlineAlgorithm {
 public:
  class State : public AlgorithmState {
   public:
    explicit State(uint64_t seed) : rng(seed) {}
    Rng rng;
    std::optional<RegretTable> table;
    std::unique_ptr<AlgorithmState> Clone() const override {
      return std::make_unique<State>(*this);
    }
    std::string Serialize() const override;
  };

  OosPlayer(std::shared_ptr<const Game> game, OosOptions options);

  std::string Name() const override { return "oos"; }
  std::unique_ptr<AlgorithmState> InitialState(uint64_t seed) const override {
    return std::make_unique<State>(seed);
  }
  std::vector<double> Act(const InfoState& state, int num_actions,
                          AlgorithmState& theta) const override;

 private:
  std::shared_ptr<const Game> game_;
  std::shared_ptr<const GameTree> tree_;
  OosOptions options_;
};

// Strategies of one player for the infostates visited in some matches.
struct PartialStrategy {
  Player player = kPlayer1;
  BehavioralStrategy strategy;
};

// Plays the player's side of a finished match against the algorithm,
// querying it at each of the player's decisions along `match`, then reports
// the match end. `theta` is advanced in place.
PartialStrategy PartialStrategyOf(const OnlineAlgorithm& alg, const Game& game,
                                  const History& match, Player player,
                                  AlgorithmState& theta);

// Keys of the player's acting infostates, ancestors first.
std::vector<std::string> DefaultQueryOrder(const GameTree& tree, Player player);

struct TabularizeOptions {
  // Initial-state draws for algorithms without a finite support.
  int draws = 1;
  uint64_t seed = 0;
};

// Queries every acting infostate of `player` in `query_order`, threading
// theta through the queries. Over several initial states the result is the
// expected strategy: each infostate's answers are weighted by the player's
// own reach under that initial state's answers, falling back to a plain
// average where every weight is zero. Throws OrderError when the order is
// not a permutation of the infostates with ancestors first.
BehavioralStrategy Tabularize(const OnlineAlgorithm& alg, const Game& game,
                              Player player,
                              const std::vector<std::string>& query_order,
                              const TabularizeOptions& options = {});
BehavioralStrategy Tabularize(const OnlineAlgorithm& alg, const GameTree& tree,
                              Player player,
                              const std::vector<std::string>& query_order,
                              const TabularizeOptions& options = {});

// Answers at every infostate of `player` agree across thetas from different
// seeds that were first advanced by different numbers of random queries.
bool ProbeStateless(const OnlineAlgorithm& alg, const Game& game, Player player,
                    int probes = 8, uint64_t seed = 0);

}  // namespace soundlab

#endif  // SOUNDLAB_ONLINE_H_
