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

#ifndef SOUNDLAB_GAME_TREE_H_
#define SOUNDLAB_GAME_TREE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "soundlab/fosg.h"

namespace soundlab {

enum class NodeKind : uint8_t { kTerminal, kChance, kDecision };

struct TreeNode {
  NodeKind kind = NodeKind::kTerminal;
  Player player = -1;  // Decision nodes only.
  int infoset = -1;    // Index into the acting player's infoset table.
  int child_begin = 0;
  int num_children = 0;
  double utility = 0.0;  // Player 1 utility at terminals.
  int parent = -1;
};

struct InfosetInfo {
  std::string key;
  int num_actions = 0;
  std::vector<int> nodes;
  // Previous acting infoset of the same player on the path, and the action
  // taken there. -1 at the player's first decision.
  int parent_infoset = -1;
  int parent_action = -1;
  int depth = 0;  // Number of earlier own decisions.
  std::optional<InfoState> state;
};

// Per-infoset probability vectors of one player, indexed like the tree's
// infoset table.
using TabularPolicy = std::vector<std::vector<double>>;

// A materialized extensive-form view of a game. A world where both players
// decide becomes a player 1 node followed by a player 2 node whose infoset
// does not depend on player 1's choice; stochastic transitions become chance
// nodes. The same structure also hosts derived trees (the response game),
// built through the Add* calls.
class GameTree {
 public:
  static constexpr int64_t kDefaultNodeBudget = 10'000'000;

  GameTree() = default;

  static GameTree Build(const Game& game,
                        int64_t node_budget = kDefaultNodeBudget);

  int root() const { return 0; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  const TreeNode& node(int id) const { return nodes_[id]; }
  int child(int id, int i) const { return children_[nodes_[id].child_begin + i]; }
  double chance_prob(int id, int i) const {
    return chance_probs_[nodes_[id].child_begin + i];
  }

  int num_infosets(Player p) const {
    return static_cast<int>(infosets_[p].size());
  }
  const InfosetInfo& infoset(Player p, int index) const {
    return infosets_[p][index];
  }
  std::optional<int> FindInfoset(Player p, const std::string& key) const;
  double utility_range() const { return utility_range_; }

  // Converts a strategy restricted to the player's acting infosets. Throws
  // MissingStrategyError when an infoset is absent and RangeError on a size
  // mismatch.
  TabularPolicy ToTabular(Player p, const BehavioralStrategy& strategy) const;
  BehavioralStrategy FromTabular(Player p, const TabularPolicy& policy) const;
  TabularPolicy UniformPolicy(Player p) const;

  // Reach of every infoset by `p`'s own actions only.
  std::vector<double> OwnReach(Player p, const TabularPolicy& policy) const;

  // Builder interface. Children of a node occupy a contiguous block that is
  // reserved when the node is added and filled with SetChild.
  int AddTerminal(double utility);
  int AddChance(std::span<const double> probs);
  int AddDecision(Player p, const std::string& key, int num_actions);
  void SetChild(int parent, int i, int child);
  // Terminal payoffs may be rewritten after Finalize; the utility range is
  // not refreshed.
  void SetTerminalUtility(int id, double utility) { nodes_[id].utility = utility; }
  void Finalize();

 private:
  int AddNode(TreeNode node, int num_children);
  int InternInfoset(Player p, const std::string& key, int num_actions);

  std::vector<TreeNode> nodes_;
  std::vector<int> children_;
  std::vector<double> chance_probs_;
  std::array<std::vector<InfosetInfo>, kNumPlayers> infosets_;
  std::array<std::unordered_map<std::string, int>, kNumPlayers> infoset_index_;
  double utility_range_ = 0.0;
};

// Expected player 1 utility of a full tabular profile.
double TreeExpectedUtility(const GameTree& tree,
                           const std::array<TabularPolicy, kNumPlayers>& profile);

}  // namespace soundlab

#endif  // SOUNDLAB_GAME_TREE_H_
