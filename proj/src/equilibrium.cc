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

#include "soundlab/equilibrium.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "soundlab/error.h"
#include "soundlab/solvers.h"

namespace soundlab {
namespace {

class BestResponder {
 public:
  BestResponder(const GameTree& tree, Player responder,
                const TabularPolicy& opponent)
      : tree_(tree),
        responder_(responder),
        opponent_(opponent),
        sign_(responder == kPlayer1 ? 1.0 : -1.0),
        reach_(tree.num_nodes(), 0.0),
        value_(tree.num_nodes(), 0.0),
        done_(tree.num_nodes(), false),
        choice_(tree.num_infosets(responder), -1) {
    if (static_cast<int>(opponent.size()) !=
        tree.num_infosets(Opponent(responder))) {
      throw MissingStrategyError("opponent policy does not cover the tree");
    }
    ComputeReach();
  }

  TreeBestResponse Run() {
    TreeBestResponse result;
    result.value = Value(tree_.root());
    result.policy.resize(choice_.size());
    for (size_t i = 0; i < choice_.size(); ++i) {
      const int n = tree_.infoset(responder_, i).num_actions;
      result.policy[i].assign(n, 0.0);
      result.policy[i][Choose(static_cast<int>(i))] = 1.0;
    }
    return result;
  }

 private:
  // Opponent and chance reach, top-down. Children always follow their
  // parent in node order.
  void ComputeReach() {
    if (tree_.num_nodes() == 0) return;
    reach_[tree_.root()] = 1.0;
    for (int id = 0; id < tree_.num_nodes(); ++id) {
      const TreeNode& n = tree_.node(id);
      for (int i = 0; i < n.num_children; ++i) {
        double factor = 1.0;
        if (n.kind == NodeKind::kChance) {
          factor = tree_.chance_prob(id, i);
        } else if (n.player != responder_) {
          const std::vector<double>& probs = opponent_[n.infoset];
          if (static_cast<int>(probs.size()) != n.num_children) {
            throw RangeError("opponent policy size mismatch");
          }
          factor = probs[i];
        }
        reach_[tree_.child(id, i)] = reach_[id] * factor;
      }
    }
  }

  int Choose(int infoset) {
    if (choice_[infoset] >= 0) return choice_[infoset];
    const InfosetInfo& info = tree_.infoset(responder_, infoset);
    int best = 0;
    double best_value = 0.0;
    for (int a = 0; a < info.num_actions; ++a) {
      double cf = 0.0;
      for (int id : info.nodes) {
        if (reach_[id] > 0.0) cf += reach_[id] * Value(tree_.child(id, a));
      }
      if (a == 0 || cf > best_value + 1e-12) {
        best = a;
        best_value = cf;
      }
    }
    choice_[infoset] = best;
    return best;
  }

  double Value(int id) {
    if (done_[id]) return value_[id];
    const TreeNode& n = tree_.node(id);
    double v = 0.0;
    switch (n.kind) {
      case NodeKind::kTerminal:
        v = sign_ * n.utility;
        break;
      case NodeKind::kChance:
        for (int i = 0; i < n.num_children; ++i) {
          const double p = tree_.chance_prob(id, i);
          if (p > 0.0) v += p * Value(tree_.child(id, i));
        }
        break;
      case NodeKind::kDecision:
        if (n.player == responder_) {
          v = Value(tree_.child(id, Choose(n.infoset)));
        } else {
          const std::vector<double>& probs = opponent_[n.infoset];
          for (int i = 0; i < n.num_children; ++i) {
            if (probs[i] > 0.0) v += probs[i] * Value(tree_.child(id, i));
          }
        }
        break;
    }
    done_[id] = true;
    value_[id] = v;
    return v;
  }

  const GameTree& tree_;
  Player responder_;
  const TabularPolicy& opponent_;
  double sign_;
  std::vector<double> reach_;
  std::vector<double> value_;
  std::vector<bool> done_;
  std::vector<int> choice_;
};

double ClampNearZero(double x) {
  return std::abs(x) <= kExploitabilityTolerance ? 0.0 : x;
}

struct TreeCache {
  std::mutex mu;
  std::map<std::string, std::shared_ptr<const GameTree>> trees;
  std::map<std::string, std::unique_ptr<GameValueCertificate>> values;
};

TreeCache& Cache() {
  static TreeCache cache;
  return cache;
}

}  // namespace

TreeBestResponse BestResponseOnTree(const GameTree& tree, Player responder,
                                    const TabularPolicy& opponent) {
  return BestResponder(tree, responder, opponent).Run();
}

BestResponseResult BestResponse(const Game& game,
                                const BehavioralStrategy& opponent,
                                Player player) {
  const GameTree tree = GameTree::Build(game);
  const TabularPolicy opp = tree.ToTabular(Opponent(player), opponent);
  TreeBestResponse br = BestResponseOnTree(tree, player, opp);
  return {tree.FromTabular(player, br.policy), br.value};
}

GameValueCertificate GameValue(const Game& game, double tolerance,
                               int64_t max_iterations) {
  auto tree = std::make_shared<const GameTree>(GameTree::Build(game));
  CfrSolver solver(tree);
  GameValueCertificate cert;
  int64_t batch = 64;
  while (true) {
    solver.Iterate(std::min(batch, max_iterations - solver.iterations()));
    const TabularPolicy avg1 = solver.AveragePolicy(kPlayer1);
    const TabularPolicy avg2 = solver.AveragePolicy(kPlayer2);
    cert.lower = -BestResponseOnTree(*tree, kPlayer2, avg1).value;
    cert.upper = BestResponseOnTree(*tree, kPlayer1, avg2).value;
    cert.value = 0.5 * (cert.lower + cert.upper);
    if (auto known = game.KnownValue();
        known && *known >= cert.lower - kExploitabilityTolerance &&
        *known <= cert.upper + kExploitabilityTolerance) {
      cert.value = *known;
    }
    cert.residual = std::max(cert.value - cert.lower, cert.upper - cert.value);
    cert.residual = std::max(cert.residual, 0.0);
    cert.iterations = solver.iterations();
    if (cert.residual <= tolerance) {
      cert.profile = {tree->FromTabular(kPlayer1, avg1),
                      tree->FromTabular(kPlayer2, avg2)};
      return cert;
    }
    if (solver.iterations() >= max_iterations) {
      throw NonConvergenceError("CFR residual " + std::to_string(cert.residual) +
                                " above tolerance after " +
                                std::to_string(solver.iterations()) +
                                " iterations");
    }
    batch *= 2;
  }
}

const GameValueCertificate& CachedGameValue(const Game& game) {
  TreeCache& cache = Cache();
  std::lock_guard<std::mutex> lock(cache.mu);
  auto& slot = cache.values[game.Name()];
  if (!slot) slot = std::make_unique<GameValueCertificate>(GameValue(game));
  return *slot;
}

double Exploitability(const GameTree& tree, double game_value,
                      const TabularPolicy& policy, Player player) {
  const double brv = BestResponseOnTree(tree, Opponent(player), policy).value;
  const double own_value = player == kPlayer1 ? game_value : -game_value;
  return ClampNearZero(own_value + brv);
}

double Exploitability(const Game& game, const BehavioralStrategy& strategy,
                      Player player) {
  const double value = CachedGameValue(game).value;
  const GameTree tree = GameTree::Build(game);
  return Exploitability(tree, value, tree.ToTabular(player, strategy), player);
}

double NashConv(const Game& game, const StrategyProfile& profile) {
  const GameTree tree = GameTree::Build(game);
  const TabularPolicy p1 = tree.ToTabular(kPlayer1, profile[kPlayer1]);
  const TabularPolicy p2 = tree.ToTabular(kPlayer2, profile[kPlayer2]);
  return BestResponseOnTree(tree, kPlayer1, p2).value +
         BestResponseOnTree(tree, kPlayer2, p1).value;
}

bool IsEpsilonEquilibriumMember(const Game& game,
                                const BehavioralStrategy& strategy,
                                Player player, double epsilon,
                                double tolerance) {
  return Exploitability(game, strategy, player) <= epsilon + tolerance;
}

}  // namespace soundlab
