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

#ifndef SOUNDLAB_SOLVERS_H_
#define SOUNDLAB_SOLVERS_H_

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "soundlab/fosg.h"
#include "soundlab/game_tree.h"

namespace soundlab {

// Positive regrets normalized; uniform when no entry is positive.
std::vector<double> RegretMatching(std::span<const double> regrets);

// Outcome-sampling behavior at the updating player's infosets:
// exploration * uniform + (1 - exploration) * current.
std::vector<double> SamplingDistribution(std::span<const double> current,
                                         double exploration);

// Cumulative regrets, average-strategy accumulators and visit counts for
// every infoset of both players, laid out in the tree's infoset order.
class RegretTable {
 public:
  explicit RegretTable(std::shared_ptr<const GameTree> tree);

  const GameTree& tree() const { return *tree_; }
  std::shared_ptr<const GameTree> shared_tree() const { return tree_; }

  std::span<double> regrets(Player p, int infoset) {
    return {regrets_[p].data() + offsets_[p][infoset], Width(p, infoset)};
  }
  std::span<const double> regrets(Player p, int infoset) const {
    return {regrets_[p].data() + offsets_[p][infoset], Width(p, infoset)};
  }
  std::span<double> average(Player p, int infoset) {
    return {average_[p].data() + offsets_[p][infoset], Width(p, infoset)};
  }
  std::span<const double> average(Player p, int infoset) const {
    return {average_[p].data() + offsets_[p][infoset], Width(p, infoset)};
  }
  int64_t visits(Player p, int infoset) const { return visits_[p][infoset]; }
  void AddVisit(Player p, int infoset) { ++visits_[p][infoset]; }
  int offset(Player p, int infoset) const { return offsets_[p][infoset]; }

  double* regret_data(Player p) { return regrets_[p].data(); }
  double* average_data(Player p) { return average_[p].data(); }
  int64_t* visit_data(Player p) { return visits_[p].data(); }

  TabularPolicy CurrentPolicy(Player p) const;
  // Normalized accumulators; uniform where nothing was accumulated.
  TabularPolicy AveragePolicy(Player p) const;
  BehavioralStrategy AverageStrategy(Player p) const;

  bool operator==(const RegretTable& other) const;

 private:
  size_t Width(Player p, int infoset) const {
    return static_cast<size_t>(tree_->infoset(p, infoset).num_actions);
  }

  std::shared_ptr<const GameTree> tree_;
  std::array<std::vector<int>, kNumPlayers> offsets_;
  std::array<std::vector<double>, kNumPlayers> regrets_;
  std::array<std::vector<double>, kNumPlayers> average_;
  std::array<std::vector<int64_t>, kNumPlayers> visits_;
};

enum class BiasMeaning {
  // bias_probability is the chance of an ordinary, untargeted sample.
  kUntargeted,
  // bias_probability is the chance of a targeted sample.
  kTargeted,
};

struct SolverConfig {
  int64_t iterations = 1000;
  double exploration = 0.6;
  double bias_probability = 0.1;
  BiasMeaning bias_meaning = BiasMeaning::kTargeted;
  std::vector<std::string> bias_targets;  // Canonical infostate keys.
  double kickstart_mu = 500.0;
  uint64_t seed = 0;
  // Iterations after which the average strategy is recorded. Empty means
  // powers of ten up to `iterations`.
  std::vector<int64_t> checkpoints;
  double weight_floor = 1e-12;

  // Throws RangeError.
  void Validate() const;
  // Probability that a sample is steered through a target.
  double TargetedFraction() const;
  std::vector<int64_t> EffectiveCheckpoints() const;
};

// Overwrites `player`'s regrets with mu * strategy at every infoset of that
// player. Average accumulators are left untouched.
RegretTable KickstartRegrets(RegretTable table, Player player,
                             const BehavioralStrategy& strategy, double mu);

// Deterministic vanilla CFR with simultaneous updates. The average strategy
// weights each iterate by the owning player's reach.
class CfrSolver {
 public:
  explicit CfrSolver(std::shared_ptr<const GameTree> tree);

  void Iterate(int64_t iterations = 1);

  int64_t iterations() const { return iterations_; }
  TabularPolicy AveragePolicy(Player p) const { return table_.AveragePolicy(p); }
  TabularPolicy CurrentPolicy(Player p) const { return table_.CurrentPolicy(p); }
  StrategyProfile AverageProfile() const;
  // Sum over iterations of player 1's expected utility of the iterate.
  double cumulative_utility() const { return cumulative_utility_; }
  const RegretTable& table() const { return table_; }

 private:
  double Traverse(int node, double reach1, double reach2, double chance);

  std::shared_ptr<const GameTree> tree_;
  RegretTable table_;
  std::array<TabularPolicy, kNumPlayers> current_;
  int64_t iterations_ = 0;
  double cumulative_utility_ = 0.0;
};

StrategyProfile RunCfr(const Game& game, int64_t iterations);

struct MccfrSnapshot {
  int64_t iteration = 0;
  std::array<TabularPolicy, kNumPlayers> average;
};

struct MccfrResult {
  StrategyProfile average;
  std::vector<MccfrSnapshot> snapshots;
  RegretTable table;
};

// Outcome-sampling MCCFR. Every iteration draws one trajectory per player;
// both use the strategies in force at the start of the iteration. The
// updating player samples exploration * uniform + (1 - exploration) *
// regret-matching, the other player and chance sample on-policy. With bias
// targets, a trajectory is steered through a target with probability
// TargetedFraction() and importance weights use the mixture probability.
MccfrResult RunMccfr(const SolverConfig& config, RegretTable table);
MccfrResult RunMccfr(const Game& game, const SolverConfig& config);

}  // namespace soundlab

#endif  // SOUNDLAB_SOLVERS_H_
