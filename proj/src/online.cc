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

#include "soundlab/online.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "soundlab/error.h"
#include "soundlab/games.h"

namespace soundlab {
namespace {

std::vector<double> Pure(int num_actions, ActionId action) {
  std::vector<double> out(num_actions, 0.0);
  out[action] = 1.0;
  return out;
}

std::string FormatDouble(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

std::vector<double> FixedPlayer::Act(const InfoState& state, int num_actions,
                                     AlgorithmState&) const {
  const std::vector<double>& probs = strategy_.At(state.key());
  if (static_cast<int>(probs.size()) != num_actions) {
    throw RangeError("strategy size mismatch at infostate " + state.key());
  }
  return probs;
}

std::string PlayCache::State::Serialize() const {
  std::string out;
  for (const auto& [key, action] : cache) {
    out += std::to_string(key.size()) + ":" + key + "=" +
           std::to_string(action) + ";";
  }
  return out;
}

std::vector<double> PlayCache::Act(const InfoState& state, int num_actions,
                                   AlgorithmState& theta) const {
  auto& cache = static_cast<State&>(theta).cache;
  if (num_actions < 2) throw RangeError("playcache needs two actions");
  if (auto it = cache.find(state.key()); it != cache.end()) {
    return Pure(num_actions, it->second);
  }
  const ActionId action = cache.empty() ? kHeads : kTails;
  cache[state.key()] = action;
  return Pure(num_actions, action);
}

std::vector<double> RoundRobinPlayer::Act(const InfoState&, int num_actions,
                                          AlgorithmState& theta) const {
  auto& queries = static_cast<State&>(theta).queries;
  return Pure(num_actions, static_cast<ActionId>(queries++ % num_actions));
}

std::string OosPlayer::State::Serialize() const {
  std::ostringstream out;
  out << "rng=" << rng.state();
  if (table) {
    for (Player p : {kPlayer1, kPlayer2}) {
      for (int i = 0; i < table->tree().num_infosets(p); ++i) {
        out << ";";
        for (double r : table->regrets(p, i)) out << FormatDouble(r) << ",";
        for (double s : table->average(p, i)) out << FormatDouble(s) << ",";
      }
    }
  }
  return out.str();
}

OosPlayer::OosPlayer(std::shared_ptr<const Game> game, OosOptions options)
    : game_(std::move(game)),
      tree_(std::make_shared<const GameTree>(GameTree::Build(*game_))),
      options_(std::move(options)) {
  options_.solver.bias_targets.clear();
  options_.solver.Validate();
}

std::vector<double> OosPlayer::Act(const InfoState& state, int num_actions,
                                   AlgorithmState& theta) const {
  auto& s = static_cast<State&>(theta);
  const Player player = state.player();
  const auto index = tree_->FindInfoset(player, state.key());
  if (!index) throw MissingStrategyError("unknown infostate " + state.key());
  if (tree_->infoset(player, *index).num_actions != num_actions) {
    throw RangeError("action count mismatch at infostate " + state.key());
  }

  SolverConfig config = options_.solver;
  config.bias_targets = {state.key()};
  config.seed = s.rng();
  config.checkpoints = {std::max<int64_t>(config.iterations, 1)};

  RegretTable table = options_.retain && s.table ? *s.table : RegretTable(tree_);
  if (!(options_.retain && s.table)) {
    if (auto it = options_.kickstart_alpha.find(state.key());
        it != options_.kickstart_alpha.end()) {
      const auto family = AlphaFamilyFor(game_->Name());
      if (!family) {
        throw UsageError("no equilibrium family to kickstart " + game_->Name());
      }
      table = KickstartRegrets(std::move(table), family->player,
                               family->strategy(it->second),
                               config.kickstart_mu);
    }
  }
  MccfrResult result = RunMccfr(config, std::move(table));
  std::vector<double> out = result.table.AveragePolicy(player)[*index];
  if (options_.retain) s.table = std::move(result.table);
  return out;
}

PartialStrategy PartialStrategyOf(const OnlineAlgorithm& alg, const Game& game,
                                  const History& match, Player player,
                                  AlgorithmState& theta) {
  PartialStrategy partial{player, {}};
  InfoState state(player, game.InitialObservation());
  for (int t = 0; t < match.Length(); ++t) {
    const WorldId world = match.worlds[t];
    const int n = game.NumActions(world, player);
    if (n > 1) partial.strategy.Set(state.key(), alg.Act(state, n, theta));
    state.Extend(match.actions[t][player],
                 game.Observe(world, match.actions[t], match.worlds[t + 1]));
  }
  alg.OnMatchEnd(state, CumulativeReward(game, match, player), theta);
  return partial;
}

std::vector<std::string> DefaultQueryOrder(const GameTree& tree,
                                           Player player) {
  std::vector<std::string> order;
  for (int i = 0; i < tree.num_infosets(player); ++i) {
    order.push_back(tree.infoset(player, i).key);
  }
  return order;
}

BehavioralStrategy Tabularize(const OnlineAlgorithm& alg, const Game& game,
                              Player player,
                              const std::vector<std::string>& query_order,
                              const TabularizeOptions& options) {
  return Tabularize(alg, GameTree::Build(game), player, query_order, options);
}

BehavioralStrategy Tabularize(const OnlineAlgorithm& alg, const GameTree& tree,
                              Player player,
                              const std::vector<std::string>& query_order,
                              const TabularizeOptions& options) {
  const int count = tree.num_infosets(player);
  if (static_cast<int>(query_order.size()) != count) {
    throw OrderError("query order has " + std::to_string(query_order.size()) +
                     " entries, expected " + std::to_string(count));
  }
  std::vector<int> indices;
  std::vector<bool> seen(count, false);
  for (const std::string& key : query_order) {
    const auto index = tree.FindInfoset(player, key);
    if (!index) throw OrderError("not an acting infostate: " + key);
    if (seen[*index]) throw OrderError("infostate queried twice: " + key);
    const int parent = tree.infoset(player, *index).parent_infoset;
    if (parent >= 0 && !seen[parent]) {
      throw OrderError("infostate queried before its ancestor: " + key);
    }
    seen[*index] = true;
    indices.push_back(*index);
  }

  OnlineAlgorithm::Support atoms;
  if (auto support = alg.InitialStateSupport()) {
    atoms = *support;
  } else {
    if (options.draws < 1) throw RangeError("draws must be at least 1");
    for (int d = 0; d < options.draws; ++d) {
      atoms.push_back({1.0 / options.draws, DeriveSeed(options.seed, d)});
    }
  }

  TabularPolicy weighted(count), plain(count);
  std::vector<double> weight(count, 0.0);
  for (int i = 0; i < count; ++i) {
    weighted[i].assign(tree.infoset(player, i).num_actions, 0.0);
    plain[i] = weighted[i];
  }
  for (const auto& [prob, seed] : atoms) {
    std::unique_ptr<AlgorithmState> theta = alg.InitialState(seed);
    TabularPolicy policy(count);
    for (int index : indices) {
      const InfosetInfo& info = tree.infoset(player, index);
      policy[index] = alg.Act(*info.state, info.num_actions, *theta);
    }
    const std::vector<double> reach = tree.OwnReach(player, policy);
    for (int i = 0; i < count; ++i) {
      weight[i] += prob * reach[i];
      for (size_t a = 0; a < policy[i].size(); ++a) {
        weighted[i][a] += prob * reach[i] * policy[i][a];
        plain[i][a] += prob * policy[i][a];
      }
    }
  }
  BehavioralStrategy out;
  for (int i = 0; i < count; ++i) {
    std::vector<double>& v = weight[i] > 0.0 ? weighted[i] : plain[i];
    double total = 0.0;
    for (double x : v) total += x;
    for (double& x : v) x /= total;
    out.Set(tree.infoset(player, i).key, v);
  }
  return out;
}

bool ProbeStateless(const OnlineAlgorithm& alg, const Game& game, Player player,
                    int probes, uint64_t seed) {
  const GameTree tree = GameTree::Build(game);
  const int count = tree.num_infosets(player);
  if (count == 0) return true;
  std::vector<std::unique_ptr<AlgorithmState>> thetas;
  Rng rng(seed);
  for (int i = 0; i < probes; ++i) {
    auto theta = alg.InitialState(DeriveSeed(seed, i));
    // Push theta somewhere else: probe i first answers i random queries.
    for (int q = 0; q < i; ++q) {
      const InfosetInfo& info = tree.infoset(player, static_cast<int>(rng() % count));
      alg.Act(*info.state, info.num_actions, *theta);
    }
    thetas.push_back(std::move(theta));
  }
  for (int j = 0; j < count; ++j) {
    const InfosetInfo& info = tree.infoset(player, j);
    std::vector<double> first;
    for (size_t i = 0; i < thetas.size(); ++i) {
      auto copy = thetas[i]->Clone();
      std::vector<double> out = alg.Act(*info.state, info.num_actions, *copy);
      if (i == 0) {
        first = out;
        continue;
      }
      for (size_t a = 0; a < out.size(); ++a) {
        if (std::abs(out[a] - first[a]) > 1e-12) return false;
      }
    }
  }
  return true;
}

}  // namespace soundlab
