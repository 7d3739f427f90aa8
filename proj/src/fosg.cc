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

#include "soundlab/fosg.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "soundlab/error.h"

namespace soundlab {
namespace {

void AppendToken(std::string& key, const std::string& token) {
  key += std::to_string(token.size());
  key += ':';
  key += token;
}

void EnumerateFrom(const Game& game, History& history, int64_t budget,
                   int64_t& visited, std::vector<History>& out) {
  if (++visited > budget) {
    throw BudgetExceededError("terminal enumeration exceeded budget of " +
                              std::to_string(budget) + " histories");
  }
  const WorldId world = history.Last();
  if (game.IsTerminal(world)) {
    out.push_back(history);
    return;
  }
  const int n1 = game.NumActions(world, kPlayer1);
  const int n2 = game.NumActions(world, kPlayer2);
  for (ActionId a1 = 0; a1 < n1; ++a1) {
    for (ActionId a2 = 0; a2 < n2; ++a2) {
      const JointAction action{a1, a2};
      for (const Outcome& outcome : game.Transition(world, action)) {
        if (outcome.probability <= 0.0) continue;
        history.Append(action, outcome.world);
        EnumerateFrom(game, history, budget, visited, out);
        history.worlds.pop_back();
        history.actions.pop_back();
      }
    }
  }
}

double OutcomeProbability(const Game& game, WorldId world,
                          const JointAction& action, WorldId next) {
  double prob = 0.0;
  for (const Outcome& outcome : game.Transition(world, action)) {
    if (outcome.world == next) prob += outcome.probability;
  }
  if (prob <= 0.0) {
    throw SoundlabError("illegal history: world " + std::to_string(next) +
                        " is not a successor of world " +
                        std::to_string(world));
  }
  return prob;
}

}  // namespace

std::string Game::ActionName(WorldId, Player, ActionId action) const {
  return std::to_string(action);
}

std::vector<ActionId> Game::LegalActions(WorldId world, Player player) const {
  std::vector<ActionId> actions(NumActions(world, player));
  for (size_t i = 0; i < actions.size(); ++i) actions[i] = i;
  return actions;
}

InfoState::InfoState(Player player, const Observation& initial)
    : player_(player) {
  AppendObservation(initial);
}

void InfoState::AppendObservation(const Observation& obs) {
  observations_.emplace_back(obs.private_obs[player_], obs.public_obs);
  AppendToken(key_, obs.private_obs[player_]);
  AppendToken(key_, obs.public_obs);
}

void InfoState::Extend(ActionId own_action, const Observation& next) {
  actions_.push_back(own_action);
  AppendToken(key_, std::to_string(own_action));
  AppendObservation(next);
}

bool InfoState::IsPrefixOf(const InfoState& other) const {
  return player_ == other.player_ && key_.size() <= other.key_.size() &&
         other.key_.compare(0, key_.size(), key_) == 0;
}

void BehavioralStrategy::Set(const std::string& key,
                             std::vector<double> probs) {
  if (probs.empty()) {
    throw RangeError("empty probability vector for infostate " + key);
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw RangeError("negative or non-finite probability for infostate " +
                       key);
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw RangeError("probabilities for infostate " + key +
                     " do not sum to one");
  }
  for (double& p : probs) p /= sum;
  table_[key] = std::move(probs);
}

const std::vector<double>* BehavioralStrategy::Find(
    const std::string& key) const {
  auto it = table_.find(key);
  return it == table_.end() ? nullptr : &it->second;
}

const std::vector<double>& BehavioralStrategy::At(
    const std::string& key) const {
  auto it = table_.find(key);
  if (it == table_.end()) {
    throw MissingStrategyError("no strategy for infostate '" + key + "'");
  }
  return it->second;
}

std::vector<History> EnumerateTerminals(const Game& game, int64_t budget) {
  std::vector<History> out;
  History history(game.InitialWorld());
  int64_t visited = 0;
  EnumerateFrom(game, history, budget, visited, out);
  return out;
}

InfoState InfoStateOf(const Game& game, const History& history,
                      Player player) {
  InfoState state(player, game.InitialObservation());
  for (int t = 0; t < history.Length(); ++t) {
    state.Extend(history.actions[t][player],
                 game.Observe(history.worlds[t], history.actions[t],
                              history.worlds[t + 1]));
  }
  return state;
}

double CumulativeReward(const Game& game, const History& history,
                        Player player) {
  double total = 0.0;
  for (int t = 0; t < history.Length(); ++t) {
    total += game.Reward(history.worlds[t], history.actions[t], player);
  }
  return total;
}

ReachProbs ReachProbabilities(const Game& game, const StrategyProfile& profile,
                              const History& history) {
  ReachProbs reach;
  std::array<InfoState, kNumPlayers> states{
      InfoState(kPlayer1, game.InitialObservation()),
      InfoState(kPlayer2, game.InitialObservation())};
  for (int t = 0; t < history.Length(); ++t) {
    const WorldId world = history.worlds[t];
    const JointAction& action = history.actions[t];
    for (Player p = 0; p < kNumPlayers; ++p) {
      const int n = game.NumActions(world, p);
      if (action[p] < 0 || action[p] >= n) {
        throw SoundlabError("illegal history: action out of range");
      }
      if (n > 1) {
        const std::vector<double>& probs = profile[p].At(states[p].key());
        if (static_cast<int>(probs.size()) != n) {
          throw RangeError("strategy size mismatch at infostate " +
                           states[p].key());
        }
        reach.player[p] *= probs[action[p]];
      }
    }
    const WorldId next = history.worlds[t + 1];
    reach.chance *= OutcomeProbability(game, world, action, next);
    const Observation obs = game.Observe(world, action, next);
    for (Player p = 0; p < kNumPlayers; ++p) states[p].Extend(action[p], obs);
  }
  return reach;
}

double ExpectedUtility(const Game& game, const StrategyProfile& profile,
                       Player player) {
  double value = 0.0;
  for (const History& z : EnumerateTerminals(game)) {
    value += ReachProbabilities(game, profile, z).Total() *
             CumulativeReward(game, z, player);
  }
  return value;
}

double UtilityRange(const Game& game, int64_t budget) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const History& z : EnumerateTerminals(game, budget)) {
    const double u = CumulativeReward(game, z, kPlayer1);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  return hi - lo;
}

}  // namespace soundlab
