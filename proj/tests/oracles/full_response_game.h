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


// The k-match response game expanded history by history, without merging
// states into beliefs, and solved by its own best-response recursion.

#ifndef SOUNDLAB_TESTS_ORACLES_FULL_RESPONSE_GAME_H_
#define SOUNDLAB_TESTS_ORACLES_FULL_RESPONSE_GAME_H_

#include <algorithm>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "soundlab/fosg.h"
#include "soundlab/online.h"

namespace oracles {

class FullResponseGame {
 public:
  FullResponseGame(const soundlab::Game& game, const soundlab::OnlineAlgorithm& alg,
                   soundlab::Player seat, int k)
      : game_(game), alg_(alg), seat_(seat), adv_(soundlab::Opponent(seat)), k_(k) {
    const auto support = alg.InitialStateSupport();
    if (!support) throw std::runtime_error("oracle needs a finite support");
    Node root;
    nodes_.push_back(root);
    for (const auto& [prob, seed] : *support) {
      const int child = StartMatch(alg.InitialState(seed), 0, "", 0.0);
      nodes_[0].children.push_back({prob, child});
    }
  }

  // Best total adversary reward over the k matches.
  double RawValue() {
    Reach(0, 1.0);
    return Value(0);
  }
  int64_t size() const { return static_cast<int64_t>(nodes_.size()); }

 private:
  struct Node {
    bool decision = false;
    std::string key;
    std::vector<std::pair<double, int>> children;  // Probability unused at decisions.
    double utility = 0.0;                          // Leaves only.
    bool leaf = false;
  };

  int Add(Node node) {
    nodes_.push_back(std::move(node));
    return static_cast<int>(nodes_.size()) - 1;
  }

  int StartMatch(std::unique_ptr<soundlab::AlgorithmState> theta, int match,
                 const std::string& prefix, double total) {
    if (match == k_) {
      Node leaf;
      leaf.leaf = true;
      leaf.utility = total;
      return Add(leaf);
    }
    const soundlab::Observation init = game_.InitialObservation();
    return Step(game_.InitialWorld(), std::move(theta),
                soundlab::InfoState(seat_, init), soundlab::InfoState(adv_, init),
                match, prefix, total, 0.0, 0.0);
  }

  int Step(soundlab::WorldId world, std::unique_ptr<soundlab::AlgorithmState> theta,
           soundlab::InfoState alg_state, soundlab::InfoState adv_state, int match,
           const std::string& prefix, double total, double alg_reward,
           double adv_reward) {
    if (game_.IsTerminal(world)) {
      alg_.OnMatchEnd(alg_state, alg_reward, *theta);
      const std::string next = prefix + "[" + adv_state.key() + "|" +
                               std::to_string(adv_reward) + "]";
      return StartMatch(std::move(theta), match + 1, next, total + adv_reward);
    }
    const int n_adv = game_.NumActions(world, adv_);
    const int n_alg = game_.NumActions(world, seat_);
    Node choose;
    choose.decision = true;
    choose.key = prefix + adv_state.key();
    const int id = Add(choose);
    for (int b = 0; b < n_adv; ++b) {
      auto branch_theta = theta->Clone();
      std::vector<double> dist{1.0};
      if (n_alg > 1) dist = alg_.Act(alg_state, n_alg, *branch_theta);
      Node algo;
      const int algo_id = Add(algo);
      for (int a = 0; a < n_alg; ++a) {
        soundlab::JointAction joint{};
        joint[seat_] = a;
        joint[adv_] = b;
        Node nature;
        const int nature_id = Add(nature);
        for (const soundlab::Outcome& o : game_.Transition(world, joint)) {
          soundlab::InfoState s_alg = alg_state, s_adv = adv_state;
          const soundlab::Observation obs = game_.Observe(world, joint, o.world);
          s_alg.Extend(a, obs);
          s_adv.Extend(b, obs);
          const int next =
              Step(o.world, branch_theta->Clone(), s_alg, s_adv, match, prefix, total,
                   alg_reward + game_.Reward(world, joint, seat_),
                   adv_reward + game_.Reward(world, joint, adv_));
          nodes_[nature_id].children.push_back({o.probability, next});
        }
        nodes_[algo_id].children.push_back({dist[a], nature_id});
      }
      nodes_[id].children.push_back({1.0, algo_id});
    }
    // A single-action adversary step is not a decision.
    if (n_adv == 1) nodes_[id].decision = false;
    return id;
  }

  void Reach(int id, double reach) {
    const Node& n = nodes_[id];
    if (n.leaf) return;
    if (n.decision) members_[n.key].push_back({id, reach});
    for (const auto& [p, c] : n.children) {
      Reach(c, n.decision ? reach : reach * p);
    }
  }

  int Choose(const std::string& key) {
    if (auto it = choice_.find(key); it != choice_.end()) return it->second;
    const auto& members = members_.at(key);
    const size_t width = nodes_[members[0].first].children.size();
    int best = 0;
    double best_value = -1e300;
    for (size_t a = 0; a < width; ++a) {
      double v = 0.0;
      for (const auto& [id, reach] : members) {
        v += reach * Value(nodes_[id].children[a].second);
      }
      if (v > best_value + 1e-12) {
        best_value = v;
        best = static_cast<int>(a);
      }
    }
    choice_[key] = best;
    return best;
  }

  double Value(int id) {
    const Node& n = nodes_[id];
    if (n.leaf) return n.utility;
    if (n.decision) return Value(n.children[Choose(n.key)].second);
    double v = 0.0;
    for (const auto& [p, c] : n.children) {
      if (p > 0.0) v += p * Value(c);
    }
    return v;
  }

  const soundlab::Game& game_;
  const soundlab::OnlineAlgorithm& alg_;
  soundlab::Player seat_, adv_;
  int k_;
  std::vector<Node> nodes_;
  std::map<std::string, std::vector<std::pair<int, double>>> members_;
  std::map<std::string, int> choice_;
};

}  // namespace oracles

#endif  // SOUNDLAB_TESTS_ORACLES_FULL_RESPONSE_GAME_H_
