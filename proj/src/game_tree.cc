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

#include "soundlab/game_tree.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "soundlab/error.h"

namespace soundlab {
namespace {

class TreeBuilder {
 public:
  TreeBuilder(const Game& game, GameTree& tree, int64_t budget)
      : game_(game), tree_(tree), budget_(budget) {}

  using States = std::array<InfoState, kNumPlayers>;

  int ExpandWorld(WorldId world, const States& states, double cumulative) {
    CheckBudget();
    const int n1 = game_.NumActions(world, kPlayer1);
    const int n2 = game_.NumActions(world, kPlayer2);
    if ((n1 == 0) != (n2 == 0)) {
      throw SoundlabError("world " + std::to_string(world) +
                          ": action sets must be all empty or all non-empty");
    }
    if (n1 == 0) return tree_.AddTerminal(cumulative);
    if (n1 > 1) {
      const int node = tree_.AddDecision(kPlayer1, states[0].key(), n1);
      RecordState(kPlayer1, states[0]);
      for (ActionId a1 = 0; a1 < n1; ++a1) {
        tree_.SetChild(node, a1,
                       ExpandSecond(world, states, cumulative, a1, n2));
      }
      return node;
    }
    return ExpandSecond(world, states, cumulative, 0, n2);
  }

 private:
  int ExpandSecond(WorldId world, const States& states, double cumulative,
                   ActionId a1, int n2) {
    if (n2 > 1) {
      CheckBudget();
      const int node = tree_.AddDecision(kPlayer2, states[1].key(), n2);
      RecordState(kPlayer2, states[1]);
      for (ActionId a2 = 0; a2 < n2; ++a2) {
        tree_.SetChild(node, a2,
                       ExpandJoint(world, states, cumulative, {a1, a2}));
      }
      return node;
    }
    return ExpandJoint(world, states, cumulative, {a1, 0});
  }

  int ExpandJoint(WorldId world, const States& states, double cumulative,
                  const JointAction& action) {
    const double r1 = game_.Reward(world, action, kPlayer1);
    const double r2 = game_.Reward(world, action, kPlayer2);
    if (std::abs(r1 + r2) > 1e-12) {
      throw SoundlabError("game is not zero-sum at world " +
                          std::to_string(world));
    }
    std::vector<Outcome> outcomes;
    double total = 0.0;
    for (const Outcome& o : game_.Transition(world, action)) {
      if (o.probability < 0.0) {
        throw SoundlabError("negative transition probability");
      }
      total += o.probability;
      if (o.probability > 0.0) outcomes.push_back(o);
    }
    if (outcomes.empty() || std::abs(total - 1.0) > 1e-9) {
      throw SoundlabError("transition distribution at world " +
                          std::to_string(world) + " does not sum to one");
    }
    if (outcomes.size() == 1) {
      return ExpandNext(world, states, cumulative + r1, action, outcomes[0]);
    }
    CheckBudget();
    std::vector<double> probs;
    for (const Outcome& o : outcomes) probs.push_back(o.probability);
    const int node = tree_.AddChance(probs);
    for (size_t i = 0; i < outcomes.size(); ++i) {
      tree_.SetChild(node, static_cast<int>(i),
                     ExpandNext(world, states, cumulative + r1, action,
                                outcomes[i]));
    }
    return node;
  }

  int ExpandNext(WorldId world, const States& states, double cumulative,
                 const JointAction& action, const Outcome& outcome) {
    const Observation obs = game_.Observe(world, action, outcome.world);
    States next = states;
    for (Player p = 0; p < kNumPlayers; ++p) next[p].Extend(action[p], obs);
    return ExpandWorld(outcome.world, next, cumulative);
  }

  void RecordState(Player p, const InfoState& state) {
    pending_states_.push_back({p, state});
  }

  void CheckBudget() {
    if (++created_ > budget_) {
      throw BudgetExceededError("game tree exceeded node budget of " +
                                std::to_string(budget_));
    }
  }

 public:
  std::vector<std::pair<Player, InfoState>> pending_states_;

 private:
  const Game& game_;
  GameTree& tree_;
  int64_t budget_;
  int64_t created_ = 0;
};

}  // namespace

GameTree GameTree::Build(const Game& game, int64_t node_budget) {
  GameTree tree;
  TreeBuilder builder(game, tree, node_budget);
  const Observation initial = game.InitialObservation();
  builder.ExpandWorld(game.InitialWorld(),
                      {InfoState(kPlayer1, initial),
                       InfoState(kPlayer2, initial)},
                      0.0);
  for (auto& [p, state] : builder.pending_states_) {
    InfosetInfo& info = tree.infosets_[p][tree.infoset_index_[p].at(state.key())];
    if (!info.state) info.state = std::move(state);
  }
  tree.Finalize();
  return tree;
}

int GameTree::AddNode(TreeNode node, int num_children) {
  node.child_begin = static_cast<int>(children_.size());
  node.num_children = num_children;
  children_.resize(children_.size() + num_children, -1);
  chance_probs_.resize(children_.size(), 0.0);
  nodes_.push_back(node);
  return static_cast<int>(nodes_.size()) - 1;
}

int GameTree::AddTerminal(double utility) {
  TreeNode node;
  node.kind = NodeKind::kTerminal;
  node.utility = utility;
  return AddNode(node, 0);
}

int GameTree::AddChance(std::span<const double> probs) {
  TreeNode node;
  node.kind = NodeKind::kChance;
  const int id = AddNode(node, static_cast<int>(probs.size()));
  std::copy(probs.begin(), probs.end(),
            chance_probs_.begin() + nodes_[id].child_begin);
  return id;
}

int GameTree::AddDecision(Player p, const std::string& key, int num_actions) {
  TreeNode node;
  node.kind = NodeKind::kDecision;
  node.player = p;
  node.infoset = InternInfoset(p, key, num_actions);
  const int id = AddNode(node, num_actions);
  infosets_[p][node.infoset].nodes.push_back(id);
  return id;
}

void GameTree::SetChild(int parent, int i, int child) {
  children_[nodes_[parent].child_begin + i] = child;
  nodes_[child].parent = parent;
}

int GameTree::InternInfoset(Player p, const std::string& key,
                            int num_actions) {
  auto [it, inserted] = infoset_index_[p].try_emplace(
      key, static_cast<int>(infosets_[p].size()));
  if (inserted) {
    InfosetInfo info;
    info.key = key;
    info.num_actions = num_actions;
    infosets_[p].push_back(std::move(info));
  } else if (infosets_[p][it->second].num_actions != num_actions) {
    throw SoundlabError("inconsistent action count in infostate " + key);
  }
  return it->second;
}

void GameTree::Finalize() {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const TreeNode& n : nodes_) {
    if (n.kind == NodeKind::kTerminal) {
      lo = std::min(lo, n.utility);
      hi = std::max(hi, n.utility);
    }
  }
  utility_range_ = nodes_.empty() ? 0.0 : hi - lo;

  for (Player p = 0; p < kNumPlayers; ++p) {
    for (size_t i = 0; i < infosets_[p].size(); ++i) {
      InfosetInfo& info = infosets_[p][i];
      bool first = true;
      for (int id : info.nodes) {
        int parent_infoset = -1;
        int parent_action = -1;
        int cur = id;
        while (nodes_[cur].parent != -1) {
          const int par = nodes_[cur].parent;
          const TreeNode& pn = nodes_[par];
          if (pn.kind == NodeKind::kDecision && pn.player == p) {
            parent_infoset = pn.infoset;
            for (int a = 0; a < pn.num_children; ++a) {
              if (children_[pn.child_begin + a] == cur) parent_action = a;
            }
            break;
          }
          cur = par;
        }
        if (first) {
          info.parent_infoset = parent_infoset;
          info.parent_action = parent_action;
          first = false;
        } else if (info.parent_infoset != parent_infoset ||
                   info.parent_action != parent_action) {
          throw SoundlabError("game does not have perfect recall at " +
                              info.key);
        }
      }
      info.depth =
          info.parent_infoset < 0 ? 0 : infosets_[p][info.parent_infoset].depth + 1;
    }
  }
}

std::optional<int> GameTree::FindInfoset(Player p,
                                         const std::string& key) const {
  auto it = infoset_index_[p].find(key);
  if (it == infoset_index_[p].end()) return std::nullopt;
  return it->second;
}

TabularPolicy GameTree::ToTabular(Player p,
                                  const BehavioralStrategy& strategy) const {
  TabularPolicy policy(infosets_[p].size());
  for (size_t i = 0; i < infosets_[p].size(); ++i) {
    const std::vector<double>& probs = strategy.At(infosets_[p][i].key);
    if (static_cast<int>(probs.size()) != infosets_[p][i].num_actions) {
      throw RangeError("strategy size mismatch at infostate " +
                       infosets_[p][i].key);
    }
    policy[i] = probs;
  }
  return policy;
}

BehavioralStrategy GameTree::FromTabular(Player p,
                                         const TabularPolicy& policy) const {
  BehavioralStrategy strategy;
  for (size_t i = 0; i < infosets_[p].size(); ++i) {
    strategy.Set(infosets_[p][i].key, policy[i]);
  }
  return strategy;
}

TabularPolicy GameTree::UniformPolicy(Player p) const {
  TabularPolicy policy;
  for (const InfosetInfo& info : infosets_[p]) {
    policy.emplace_back(info.num_actions, 1.0 / info.num_actions);
  }
  return policy;
}

std::vector<double> GameTree::OwnReach(Player p,
                                       const TabularPolicy& policy) const {
  std::vector<double> reach(infosets_[p].size(), 1.0);
  for (size_t i = 0; i < infosets_[p].size(); ++i) {
    const InfosetInfo& info = infosets_[p][i];
    if (info.parent_infoset >= 0) {
      reach[i] = reach[info.parent_infoset] *
                 policy[info.parent_infoset][info.parent_action];
    }
  }
  return reach;
}

namespace {

double UtilityFrom(const GameTree& tree, int id,
                   const std::array<TabularPolicy, kNumPlayers>& profile) {
  const TreeNode& n = tree.node(id);
  switch (n.kind) {
    case NodeKind::kTerminal:
      return n.utility;
    case NodeKind::kChance: {
      double v = 0.0;
      for (int i = 0; i < n.num_children; ++i) {
        v += tree.chance_prob(id, i) * UtilityFrom(tree, tree.child(id, i), profile);
      }
      return v;
    }
    case NodeKind::kDecision: {
      const std::vector<double>& probs = profile[n.player][n.infoset];
      double v = 0.0;
      for (int i = 0; i < n.num_children; ++i) {
        if (probs[i] > 0.0) {
          v += probs[i] * UtilityFrom(tree, tree.child(id, i), profile);
        }
      }
      return v;
    }
  }
  return 0.0;
}

}  // namespace

double TreeExpectedUtility(
    const GameTree& tree,
    const std::array<TabularPolicy, kNumPlayers>& profile) {
  return UtilityFrom(tree, tree.root(), profile);
}

}  // namespace soundlab
