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

#ifndef SOUNDLAB_ARENA_H_
#define SOUNDLAB_ARENA_H_

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "soundlab/fosg.h"
#include "soundlab/game_tree.h"
#include "soundlab/online.h"
#include "soundlab/rng.h"

namespace soundlab {

struct QueryRecord {
  Player player = kPlayer1;
  std::string infoset;
  std::vector<double> policy;
};

struct MatchLog {
  History history{0};
  std::vector<QueryRecord> queries;
  double reward1 = 0.0;
  // Serialized theta of both players when the match started; empty when
  // not recorded.
  std::array<std::string, kNumPlayers> theta_before;
};

struct RepeatedGameRecord {
  uint64_t seed = 0;
  std::vector<MatchLog> matches;

  // (1/k) * sum of the player's match rewards.
  double AverageReward(Player player = kPlayer1) const;
};

using AlgorithmPair = std::array<const OnlineAlgorithm*, kNumPlayers>;

// Samples one match. Each algorithm is queried at its decisions with its own
// infostate; actions and chance are drawn from `rng`. Both algorithms see the
// match end. Thetas are advanced in place.
MatchLog PlayMatch(const Game& game, const AlgorithmPair& algs,
                   const std::array<AlgorithmState*, kNumPlayers>& thetas,
                   Rng& rng, bool log_queries = true);

struct RunOptions {
  int jobs = 1;
  bool record_theta = true;
  bool record_queries = true;
};

// One record per seed: fresh initial states drawn from the seed, k matches
// with memory kept between them.
std::vector<RepeatedGameRecord> RunRepeated(const Game& game,
                                            const AlgorithmPair& algs, int k,
                                            const std::vector<uint64_t>& seeds,
                                            const RunOptions& options = {});

// The k-match game faced by an adversary of a fixed online algorithm, solved
// exactly. The adversary remembers its own trajectories and rewards across
// matches; the algorithm's answers and chance are part of the environment.
//
// Solved as a dynamic program over beliefs, i.e. distributions over the
// algorithm's theta given everything the adversary has seen. For each belief
// one match is expanded into a tree whose leaves carry the match reward plus
// the value of the remaining matches from the posterior belief, and the
// adversary's best response is computed on that tree.
class ResponseGame {
 public:
  static constexpr int64_t kDefaultNodeBudget = 10'000'000;

  // Throws NondeterminismError when the algorithm has no finite initial
  // state support.
  ResponseGame(std::shared_ptr<const Game> game, const OnlineAlgorithm& alg,
               Player alg_player, int64_t node_budget = kDefaultNodeBudget);

  Player adversary() const { return Opponent(alg_player_); }

  // Best total adversary reward over k matches.
  double RawValue(int k);
  // RawValue(k) minus k times the adversary's game value: how much more
  // than an equilibrium opponent would concede the algorithm gives up.
  double Brv(int k);
  int64_t nodes_expanded() const { return nodes_; }

  // Optimal play, valid after RawValue(k) for every remaining <= k.
  const std::string& initial_belief() const { return initial_; }
  ActionId AdversaryAction(const std::string& belief, int remaining,
                           const std::string& infoset) const;
  const std::string& Posterior(const std::string& belief,
                               const std::string& terminal_infoset,
                               double reward) const;

 private:
  struct Atom {
    double prob = 0.0;
    std::shared_ptr<const AlgorithmState> theta;
  };
  struct Leaf {
    int node;
    double reward;  // Adversary's match reward.
    std::string group;
  };
  struct Expansion {
    GameTree tree;
    std::vector<Leaf> leaves;
    std::map<std::string, std::string> posterior;  // Group -> belief key.
  };
  struct Solved {
    double value;
    std::map<std::string, ActionId> policy;
  };
  class Expander;

  std::string Intern(std::vector<Atom> atoms);
  Expansion& Expand(const std::string& belief);
  double Solve(const std::string& belief, int remaining);
  static std::string GroupKey(const std::string& terminal_infoset,
                              double reward);

  std::shared_ptr<const Game> game_;
  const OnlineAlgorithm& alg_;
  Player alg_player_;
  int64_t budget_;
  int64_t nodes_ = 0;
  std::string initial_;
  std::map<std::string, std::vector<Atom>> beliefs_;
  std::map<std::string, Expansion> expansions_;
  std::map<std::pair<std::string, int>, Solved> solved_;
};

// The adversary that follows the response game's optimal policy for a
// k-match horizon. Its theta is the current belief and the matches left.
class BestResponseAdversary : public OnlineAlgorithm {
 public:
  class State : public AlgorithmState {
   public:
    std::string belief;
    int remaining = 0;
    std::unique_ptr<AlgorithmState> Clone() const override {
      return std::make_unique<State>(*this);
    }
    std::string Serialize() const override {
      return std::to_string(remaining) + "|" + belief;
    }
  };

  // Solves the response game up to `horizon` on construction.
  BestResponseAdversary(std::shared_ptr<ResponseGame> response, int horizon);

  std::string Name() const override { return "br"; }
  std::unique_ptr<AlgorithmState> InitialState(uint64_t) const override;
  std::vector<double> Act(const InfoState& state, int num_actions,
                          AlgorithmState& theta) const override;
  void OnMatchEnd(const InfoState& terminal, double reward,
                  AlgorithmState& theta) const override;
  std::optional<Support> InitialStateSupport() const override {
    return Support{{1.0, 0}};
  }

 private:
  std::shared_ptr<ResponseGame> response_;
  int horizon_;
};

struct SoundnessReport {
  double epsilon = 0.0;
  int k_max = 0;
  std::vector<int> k_values;
  std::vector<double> brv;
  // max over k' in [k, k_max] of brv(k') / k'.
  std::vector<double> epsilon_certified;
  // brv(k') <= k' * epsilon for every probed k' >= k.
  std::vector<bool> certified;
  // The condition is checked only up to k_max.
  std::string horizon_note;
};

SoundnessReport CertifySoundness(ResponseGame& response, int k_max,
                                 double epsilon, double tolerance = 1e-9);

// Sampled estimate of the shortfall Brv(k) against a given adversary; a lower
// bound on the exact value, with its standard error.
struct ShortfallEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  int samples = 0;
};
ShortfallEstimate EstimateShortfall(const Game& game,
                                    const OnlineAlgorithm& alg,
                                    Player alg_player,
                                    const OnlineAlgorithm& adversary, int k,
                                    const std::vector<uint64_t>& seeds,
                                    int jobs = 1);

// Seeds 0..count-1 mixed with the master seed.
std::vector<uint64_t> SeedRange(uint64_t master_seed, int count);

}  // namespace soundlab

#endif  // SOUNDLAB_ARENA_H_
