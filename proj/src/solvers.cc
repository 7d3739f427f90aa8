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

#include "soundlab/solvers.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "soundlab/error.h"
#include "soundlab/rng.h"

namespace soundlab {
namespace {

// Regret matching into a caller-owned buffer.
void MatchInto(const double* regrets, int n, double* out) {
  double total = 0.0;
  for (int a = 0; a < n; ++a) {
    const double r = regrets[a] > 0.0 ? regrets[a] : 0.0;
    out[a] = r;
    total += r;
  }
  if (total > 0.0) {
    const double inv = 1.0 / total;
    for (int a = 0; a < n; ++a) out[a] *= inv;
  } else {
    for (int a = 0; a < n; ++a) out[a] = 1.0 / n;
  }
}

int SampleIndex(const double* probs, int n, double u) {
  double acc = 0.0;
  for (int a = 0; a < n - 1; ++a) {
    acc += probs[a];
    if (u < acc) return a;
  }
  // Skip trailing zero-probability entries left by rounding.
  for (int a = n - 1; a > 0; --a) {
    if (probs[a] > 0.0) return a;
  }
  return 0;
}

}  // namespace

std::vector<double> RegretMatching(std::span<const double> regrets) {
  if (regrets.empty()) throw RangeError("regret vector is empty");
  std::vector<double> out(regrets.size());
  MatchInto(regrets.data(), static_cast<int>(regrets.size()), out.data());
  return out;
}

std::vector<double> SamplingDistribution(std::span<const double> current,
                                         double exploration) {
  std::vector<double> out(current.size());
  const double uniform = 1.0 / static_cast<double>(current.size());
  for (size_t a = 0; a < current.size(); ++a) {
    out[a] = exploration * uniform + (1.0 - exploration) * current[a];
  }
  return out;
}

RegretTable::RegretTable(std::shared_ptr<const GameTree> tree)
    : tree_(std::move(tree)) {
  for (Player p : {kPlayer1, kPlayer2}) {
    int total = 0;
    offsets_[p].reserve(tree_->num_infosets(p));
    for (int i = 0; i < tree_->num_infosets(p); ++i) {
      offsets_[p].push_back(total);
      total += tree_->infoset(p, i).num_actions;
    }
    regrets_[p].assign(total, 0.0);
    average_[p].assign(total, 0.0);
    visits_[p].assign(tree_->num_infosets(p), 0);
  }
}

TabularPolicy RegretTable::CurrentPolicy(Player p) const {
  TabularPolicy policy(tree_->num_infosets(p));
  for (int i = 0; i < tree_->num_infosets(p); ++i) {
    policy[i] = RegretMatching(regrets(p, i));
  }
  return policy;
}

TabularPolicy RegretTable::AveragePolicy(Player p) const {
  TabularPolicy policy(tree_->num_infosets(p));
  for (int i = 0; i < tree_->num_infosets(p); ++i) {
    std::span<const double> acc = average(p, i);
    double total = 0.0;
    for (double x : acc) total += x;
    policy[i].resize(acc.size());
    for (size_t a = 0; a < acc.size(); ++a) {
      policy[i][a] = total > 0.0 ? acc[a] / total : 1.0 / acc.size();
    }
  }
  return policy;
}

BehavioralStrategy RegretTable::AverageStrategy(Player p) const {
  return tree_->FromTabular(p, AveragePolicy(p));
}

bool RegretTable::operator==(const RegretTable& other) const {
  return regrets_ == other.regrets_ && average_ == other.average_ &&
         visits_ == other.visits_;
}

void SolverConfig::Validate() const {
  auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (iterations < 0) throw RangeError("iterations must be non-negative");
  if (!unit(exploration)) throw RangeError("exploration must be in [0,1]");
  if (!unit(bias_probability)) {
    throw RangeError("bias probability must be in [0,1]");
  }
  if (!(kickstart_mu >= 0.0)) throw RangeError("mu must be non-negative");
  if (!(weight_floor > 0.0)) throw RangeError("weight floor must be positive");
  for (size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 1 || (i > 0 && checkpoints[i] <= checkpoints[i - 1])) {
      throw RangeError("checkpoints must be positive and strictly increasing");
    }
  }
}

double SolverConfig::TargetedFraction() const {
  if (bias_targets.empty()) return 0.0;
  return bias_meaning == BiasMeaning::kUntargeted ? 1.0 - bias_probability
                                                  : bias_probability;
}

std::vector<int64_t> SolverConfig::EffectiveCheckpoints() const {
  if (!checkpoints.empty()) return checkpoints;
  std::vector<int64_t> out;
  for (int64_t c = 1; c <= iterations; c *= 10) out.push_back(c);
  if (iterations > 0 && out.back() != iterations) out.push_back(iterations);
  return out;
}

RegretTable KickstartRegrets(RegretTable table, Player player,
                             const BehavioralStrategy& strategy, double mu) {
  if (!(mu >= 0.0)) throw RangeError("mu must be non-negative");
  const TabularPolicy policy = table.tree().ToTabular(player, strategy);
  for (int i = 0; i < table.tree().num_infosets(player); ++i) {
    std::span<double> r = table.regrets(player, i);
    for (size_t a = 0; a < r.size(); ++a) r[a] = mu * policy[i][a];
  }
  return table;
}

CfrSolver::CfrSolver(std::shared_ptr<const GameTree> tree)
    : tree_(std::move(tree)), table_(tree_) {}

void CfrSolver::Iterate(int64_t iterations) {
  for (int64_t t = 0; t < iterations; ++t) {
    current_ = {table_.CurrentPolicy(kPlayer1), table_.CurrentPolicy(kPlayer2)};
    cumulative_utility_ += Traverse(tree_->root(), 1.0, 1.0, 1.0);
    ++iterations_;
  }
}

double CfrSolver::Traverse(int id, double reach1, double reach2,
                           double chance) {
  const TreeNode& n = tree_->node(id);
  if (n.kind == NodeKind::kTerminal) return n.utility;
  if (n.kind == NodeKind::kChance) {
    double v = 0.0;
    for (int i = 0; i < n.num_children; ++i) {
      const double p = tree_->chance_prob(id, i);
      if (p > 0.0) {
        v += p * Traverse(tree_->child(id, i), reach1, reach2, chance * p);
      }
    }
    return v;
  }
  const Player p = n.player;
  const std::vector<double>& sigma = current_[p][n.infoset];
  double child_values[16];
  std::vector<double> spill;
  double* values = child_values;
  if (n.num_children > 16) {
    spill.resize(n.num_children);
    values = spill.data();
  }
  double v = 0.0;
  for (int a = 0; a < n.num_children; ++a) {
    const int c = tree_->child(id, a);
    values[a] = p == kPlayer1
                    ? Traverse(c, reach1 * sigma[a], reach2, chance)
                    : Traverse(c, reach1, reach2 * sigma[a], chance);
    v += sigma[a] * values[a];
  }
  const double own = p == kPlayer1 ? reach1 : reach2;
  const double other = (p == kPlayer1 ? reach2 : reach1) * chance;
  const double sign = p == kPlayer1 ? 1.0 : -1.0;
  std::span<double> regrets = table_.regrets(p, n.infoset);
  std::span<double> avg = table_.average(p, n.infoset);
  for (int a = 0; a < n.num_children; ++a) {
    regrets[a] += other * sign * (values[a] - v);
    avg[a] += own * sigma[a];
  }
  table_.AddVisit(p, n.infoset);
  return v;
}

StrategyProfile CfrSolver::AverageProfile() const {
  return {table_.AverageStrategy(kPlayer1), table_.AverageStrategy(kPlayer2)};
}

StrategyProfile RunCfr(const Game& game, int64_t iterations) {
  CfrSolver solver(std::make_shared<const GameTree>(GameTree::Build(game)));
  solver.Iterate(iterations);
  return solver.AverageProfile();
}

namespace {

// One outcome-sampling run. Regret updates of a whole iteration are buffered
// and applied after both traversals, so each traversal sees the strategies
// in force when the iteration began.
class OutcomeSampler {
 public:
  OutcomeSampler(const SolverConfig& config, RegretTable& table)
      : table_(table),
        rng_(config.seed),
        exploration_(config.exploration),
        floor_(config.weight_floor),
        delta_(config.TargetedFraction()) {
    const GameTree& tree = table.tree();
    const int num_nodes = tree.num_nodes();
    nodes_.resize(num_nodes);
    int width = 1;
    int max_depth = 0;
    std::vector<int> depth(num_nodes, 0);
    for (int id = 0; id < num_nodes; ++id) {
      const TreeNode& n = tree.node(id);
      Flat& f = nodes_[id];
      f.kind = n.kind;
      f.player = static_cast<int8_t>(n.player);
      f.num_children = n.num_children;
      f.first = static_cast<int>(children_.size());
      f.infoset = n.infoset;
      f.utility = n.utility;
      if (n.kind == NodeKind::kDecision) f.offset = table.offset(n.player, n.infoset);
      for (int i = 0; i < n.num_children; ++i) {
        children_.push_back(tree.child(id, i));
        chance_.push_back(n.kind == NodeKind::kChance ? tree.chance_prob(id, i) : 0.0);
        depth[tree.child(id, i)] = depth[id] + 1;
      }
      width = std::max(width, n.num_children);
      max_depth = std::max(max_depth, depth[id]);
    }
    sigma_.resize(width);
    base_.resize(width);
    targeted_.resize(width);
    path_.resize(max_depth + 1);
    pending_.reserve(2 * (max_depth + 1));
    if (delta_ > 0.0) MarkTargets(tree, config.bias_targets);
  }

  void Iteration() {
    pending_.clear();
    Traverse(kPlayer1);
    Traverse(kPlayer2);
    for (const Pending& u : pending_) {
      double* r = u.regrets;
      const double shared = u.value * u.sigma;
      for (int a = 0; a < u.num_actions; ++a) r[a] -= shared;
      r[u.action] += u.value;
    }
  }

 private:
  struct Flat {
    NodeKind kind = NodeKind::kTerminal;
    int8_t player = -1;
    bool inside = false;      // At or below a target node.
    bool consistent = false;  // Inside, or an ancestor of a target node.
    int num_children = 0;
    int first = 0;
    int offset = 0;
    int infoset = -1;
    double utility = 0.0;
  };
  struct Step {
    int8_t player;  // -1 for chance.
    int offset;
    int infoset;
    int num_actions;
    int action;
    double prob;          // Owner's probability of the sampled action.
    double others_reach;  // Opponent and chance reach at the node.
  };
  struct Pending {
    double* regrets;
    int num_actions;
    int action;
    double value;  // Sampled counterfactual value of the taken action.
    double sigma;
  };

  void MarkTargets(const GameTree& tree,
                   const std::vector<std::string>& targets) {
    const int n = tree.num_nodes();
    std::vector<uint8_t> is_target(n, 0);
    bool any = false;
    for (const std::string& key : targets) {
      for (Player p : {kPlayer1, kPlayer2}) {
        if (auto index = tree.FindInfoset(p, key)) {
          for (int id : tree.infoset(p, *index).nodes) is_target[id] = 1;
          any = true;
        }
      }
    }
    if (!any) throw RangeError("no bias target names an infoset of the game");
    // Parents precede children in node order.
    for (int id = 0; id < n; ++id) {
      const int parent = tree.node(id).parent;
      nodes_[id].inside = is_target[id] || (parent >= 0 && nodes_[parent].inside);
    }
    for (int id = n - 1; id >= 0; --id) {
      if (nodes_[id].inside) nodes_[id].consistent = true;
      const int parent = tree.node(id).parent;
      if (nodes_[id].consistent && parent >= 0) nodes_[parent].consistent = true;
    }
  }

  void Traverse(Player update) {
    const Flat* nodes = nodes_.data();
    const int* children = children_.data();
    const double* chance = chance_.data();
    double* sigma = sigma_.data();
    double* base = base_.data();
    double* targeted = targeted_.data();
    double* regrets[2] = {table_.regret_data(kPlayer1),
                          table_.regret_data(kPlayer2)};
    double* average[2] = {table_.average_data(kPlayer1),
                          table_.average_data(kPlayer2)};
    int64_t* visits = table_.visit_data(update);
    const double eps = exploration_;
    const double delta = delta_;

    const bool targeted_sample = delta > 0.0 && rng_.Uniform() < delta;
    double q_targeted = delta > 0.0 ? 1.0 : 0.0;
    double q_plain = 1.0;
    double others_reach = 1.0;
    int steps = 0;
    int id = 0;
    while (nodes[id].kind != NodeKind::kTerminal) {
      const Flat& n = nodes[id];
      const int k = n.num_children;
      if (n.kind == NodeKind::kChance) {
        for (int a = 0; a < k; ++a) sigma[a] = base[a] = chance[n.first + a];
      } else {
        MatchInto(regrets[n.player] + n.offset, k, sigma);
        if (n.player == update) {
          const double floor = eps / k;
          for (int a = 0; a < k; ++a) base[a] = floor + (1.0 - eps) * sigma[a];
        } else {
          for (int a = 0; a < k; ++a) base[a] = sigma[a];
          const double w =
              others_reach / (delta * q_targeted + (1.0 - delta) * q_plain);
          if (w > 0.0) {
            double* avg = average[n.player] + n.offset;
            for (int a = 0; a < k; ++a) avg[a] += w * sigma[a];
          }
        }
      }
      if (q_targeted > 0.0) FillTargeted(n, k, children, base, targeted);
      const int a = SampleIndex(targeted_sample ? targeted : base, k,
                                rng_.Uniform());
      if (q_targeted > 0.0) q_targeted *= targeted[a];
      q_plain *= base[a];
      Step& step = path_[steps++];
      step.player = n.kind == NodeKind::kChance ? -1 : n.player;
      step.offset = n.offset;
      step.infoset = n.infoset;
      step.num_actions = k;
      step.action = a;
      step.prob = sigma[a];
      step.others_reach = others_reach;
      if (step.player == update) {
        ++visits[n.infoset];
      } else {
        others_reach *= sigma[a];
      }
      id = children[n.first + a];
    }
    const double qz = delta * q_targeted + (1.0 - delta) * q_plain;
    if (!(qz >= floor_)) {
      throw NumericalError("sample probability " + std::to_string(qz) +
                           " below the weight floor");
    }
    const double utility =
        update == kPlayer1 ? nodes[id].utility : -nodes[id].utility;
    const double scale = utility / qz;
    double tail = 1.0;
    for (int i = steps - 1; i >= 0; --i) {
      const Step& step = path_[i];
      if (step.player == update) {
        const double value = scale * step.others_reach * tail;
        if (value != 0.0) {
          pending_.push_back({regrets[update] + step.offset, step.num_actions,
                              step.action, value, step.prob});
        }
      }
      tail *= step.prob;
    }
  }

  // Base distribution restricted to children that can still lead through a
  // target; uniform over them when the base gives them no mass.
  void FillTargeted(const Flat& n, int k, const int* children,
                    const double* base, double* targeted) const {
    if (n.inside) {
      for (int a = 0; a < k; ++a) targeted[a] = base[a];
      return;
    }
    double mass = 0.0;
    int count = 0;
    for (int a = 0; a < k; ++a) {
      if (nodes_[children[n.first + a]].consistent) {
        mass += base[a];
        ++count;
      }
    }
    for (int a = 0; a < k; ++a) {
      const bool ok = nodes_[children[n.first + a]].consistent;
      targeted[a] = !ok ? 0.0 : mass > 0.0 ? base[a] / mass : 1.0 / count;
    }
  }

  RegretTable& table_;
  Rng rng_;
  double exploration_;
  double floor_;
  double delta_;
  std::vector<Flat> nodes_;
  std::vector<int> children_;
  std::vector<double> chance_;
  std::vector<double> sigma_;
  std::vector<double> base_;
  std::vector<double> targeted_;
  std::vector<Step> path_;
  std::vector<Pending> pending_;
};

}  // namespace

MccfrResult RunMccfr(const SolverConfig& config, RegretTable table) {
  config.Validate();
  MccfrResult result{{}, {}, std::move(table)};
  OutcomeSampler sampler(config, result.table);
  const std::vector<int64_t> checkpoints = config.EffectiveCheckpoints();
  size_t next = 0;
  for (int64_t t = 1; t <= config.iterations; ++t) {
    sampler.Iteration();
    while (next < checkpoints.size() && checkpoints[next] < t) ++next;
    if (next < checkpoints.size() && checkpoints[next] == t) {
      result.snapshots.push_back({t,
                                  {result.table.AveragePolicy(kPlayer1),
                                   result.table.AveragePolicy(kPlayer2)}});
      ++next;
    }
  }
  result.average = {result.table.AverageStrategy(kPlayer1),
                    result.table.AverageStrategy(kPlayer2)};
  return result;
}

MccfrResult RunMccfr(const Game& game, const SolverConfig& config) {
  return RunMccfr(config, RegretTable(std::make_shared<const GameTree>(
                              GameTree::Build(game))));
}

}  // namespace soundlab
