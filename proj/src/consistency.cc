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

#include "soundlab/consistency.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "soundlab/equilibrium.h"
#include "soundlab/error.h"
#include "soundlab/lp.h"

namespace soundlab {
namespace {

std::string FormatPolicy(const std::vector<double>& probs) {
  std::string out = "[";
  char buf[32];
  for (size_t a = 0; a < probs.size(); ++a) {
    std::snprintf(buf, sizeof(buf), "%.6g", probs[a]);
    out += (a ? "," : "") + std::string(buf);
  }
  return out + "]";
}

bool SamePolicy(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > 1e-9) return false;
  }
  return true;
}

// Completion by sequence-form linear programming on a prebuilt tree, memoized
// per partial strategy.
class Completer {
 public:
  Completer(const Game& game, const CompletionOptions& options)
      : tree_(GameTree::Build(game)),
        options_(options),
        certificate_(CachedGameValue(game)) {
    BuildSequences();
  }

  const GameTree& tree() const { return tree_; }
  double utility_range() const { return tree_.utility_range(); }

  Completion Run(const PartialStrategy& partial) {
    const std::string key = Key(partial);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Completion result = Search(partial);
    memo_.emplace(key, result);
    return result;
  }

 private:
  // Sequence numbering per player: 0 is the empty sequence, (infoset, action)
  // pairs follow in infoset order.
  struct Sequences {
    int count = 1;
    std::vector<int> first;   // Per infoset, id of its action 0.
    std::vector<int> parent;  // Per infoset, id of the preceding sequence.
    int Of(int infoset, int action) const { return first[infoset] + action; }
  };
  struct Payoff {
    int seq1;
    int seq2;
    double value;  // Chance-weighted player 1 utility.
  };

  static std::string Key(const PartialStrategy& partial) {
    std::ostringstream out;
    out << partial.player << "|";
    out.precision(17);
    for (const auto& [k, probs] : partial.strategy) {
      out << k.size() << ":" << k;
      for (double x : probs) out << "," << x;
      out << ";";
    }
    return out.str();
  }

  void BuildSequences() {
    for (Player q : {kPlayer1, kPlayer2}) {
      Sequences& s = seqs_[q];
      for (int i = 0; i < tree_.num_infosets(q); ++i) {
        s.first.push_back(s.count);
        s.count += tree_.infoset(q, i).num_actions;
      }
      for (int i = 0; i < tree_.num_infosets(q); ++i) {
        const InfosetInfo& info = tree_.infoset(q, i);
        s.parent.push_back(info.parent_infoset < 0
                               ? 0
                               : s.Of(info.parent_infoset, info.parent_action));
      }
    }
    std::map<std::pair<int, int>, double> acc;
    CollectPayoffs(tree_.root(), 0, 0, 1.0, acc);
    for (const auto& [seqs, value] : acc) {
      payoffs_.push_back({seqs.first, seqs.second, value});
    }
  }

  void CollectPayoffs(int id, int seq1, int seq2, double chance,
                      std::map<std::pair<int, int>, double>& acc) const {
    const TreeNode& n = tree_.node(id);
    if (n.kind == NodeKind::kTerminal) {
      if (n.utility != 0.0) acc[{seq1, seq2}] += chance * n.utility;
      return;
    }
    for (int i = 0; i < n.num_children; ++i) {
      const int c = tree_.child(id, i);
      if (n.kind == NodeKind::kChance) {
        const double q = tree_.chance_prob(id, i);
        if (q > 0.0) CollectPayoffs(c, seq1, seq2, chance * q, acc);
      } else if (n.player == kPlayer1) {
        CollectPayoffs(c, seqs_[kPlayer1].Of(n.infoset, i), seq2, chance, acc);
      } else {
        CollectPayoffs(c, seq1, seqs_[kPlayer2].Of(n.infoset, i), chance, acc);
      }
    }
  }

  Completion Search(const PartialStrategy& partial) {
    const Player p = partial.player;
    const Player o = Opponent(p);
    std::vector<bool> filled(tree_.num_infosets(p), false);
    for (const auto& [key, probs] : partial.strategy) {
      const auto index = tree_.FindInfoset(p, key);
      if (!index) throw RangeError("not an acting infostate of the player: " + key);
      if (static_cast<int>(probs.size()) != tree_.infoset(p, *index).num_actions) {
        throw RangeError("strategy size mismatch at infostate " + key);
      }
      filled[*index] = true;
    }
    const int free = static_cast<int>(
        std::count(filled.begin(), filled.end(), false));
    if (free > options_.max_unfilled) {
      throw BudgetExceededError(std::to_string(free) +
                                " unfilled infostates exceed the cap of " +
                                std::to_string(options_.max_unfilled));
    }

    // min over realization plans x of p (pinned where filled) of the
    // opponent's best-response value, written through the dual of the
    // opponent's sequence-form polytope.
    LinearProgram lp;
    std::vector<int> x(seqs_[p].count);
    for (int& var : x) var = lp.AddVariable(0.0);
    std::vector<int> v(tree_.num_infosets(o) + 1);
    v[0] = lp.AddVariable(1.0, /*free=*/true);
    for (size_t j = 1; j < v.size(); ++j) v[j] = lp.AddVariable(0.0, true);

    lp.AddConstraint({{x[0], 1.0}}, LinearProgram::Sense::kEqual, 1.0);
    for (int i = 0; i < tree_.num_infosets(p); ++i) {
      const int parent = seqs_[p].parent[i];
      const InfosetInfo& info = tree_.infoset(p, i);
      LinearProgram::Terms terms{{x[parent], -1.0}};
      for (int a = 0; a < info.num_actions; ++a) {
        terms.push_back({x[seqs_[p].Of(i, a)], 1.0});
      }
      lp.AddConstraint(terms, LinearProgram::Sense::kEqual, 0.0);
      if (!filled[i]) continue;
      const std::vector<double>& probs = partial.strategy.At(info.key);
      for (int a = 0; a < info.num_actions; ++a) {
        lp.AddConstraint({{x[seqs_[p].Of(i, a)], 1.0}, {x[parent], -probs[a]}},
                         LinearProgram::Sense::kEqual, 0.0);
      }
    }
    // One row per opponent sequence: its best-response bound covers the
    // payoff it collects against x.
    std::vector<LinearProgram::Terms> rows(seqs_[o].count);
    rows[0].push_back({v[0], 1.0});
    for (int j = 0; j < tree_.num_infosets(o); ++j) {
      rows[seqs_[o].parent[j]].push_back({v[j + 1], -1.0});
      for (int a = 0; a < tree_.infoset(o, j).num_actions; ++a) {
        rows[seqs_[o].Of(j, a)].push_back({v[j + 1], 1.0});
      }
    }
    const double sign = o == kPlayer1 ? 1.0 : -1.0;
    for (const Payoff& pay : payoffs_) {
      const int xs = p == kPlayer1 ? pay.seq1 : pay.seq2;
      const int ys = p == kPlayer1 ? pay.seq2 : pay.seq1;
      rows[ys].push_back({x[xs], -sign * pay.value});
    }
    for (const auto& row : rows) {
      lp.AddConstraint(row, LinearProgram::Sense::kGreaterEqual, 0.0);
    }
    const LinearProgram::Solution sol = lp.Solve();

    TabularPolicy policy(tree_.num_infosets(p));
    for (int i = 0; i < tree_.num_infosets(p); ++i) {
      const InfosetInfo& info = tree_.infoset(p, i);
      if (filled[i]) {
        policy[i] = partial.strategy.At(info.key);
        continue;
      }
      policy[i].assign(info.num_actions, 1.0 / info.num_actions);
      if (sol.x[x[seqs_[p].parent[i]]] <= 1e-12) continue;
      double total = 0.0;
      for (int a = 0; a < info.num_actions; ++a) {
        policy[i][a] = std::max(0.0, sol.x[x[seqs_[p].Of(i, a)]]);
        total += policy[i][a];
      }
      if (total <= 0.0) continue;
      for (double& q : policy[i]) q /= total;
    }
    Completion result;
    result.strategy = tree_.FromTabular(p, policy);
    result.exploitability = Exploitability(tree_, certificate_.value, policy, p);
    return result;
  }

  GameTree tree_;
  CompletionOptions options_;
  const GameValueCertificate& certificate_;
  std::array<Sequences, kNumPlayers> seqs_;
  std::vector<Payoff> payoffs_;
  std::map<std::string, Completion> memo_;
};

}  // namespace

Completion CompletionExploitability(const Game& game,
                                    const PartialStrategy& partial,
                                    const CompletionOptions& options) {
  return Completer(game, options).Run(partial);
}

AuditResult AuditLocal(const std::vector<RepeatedGameRecord>& records,
                       const Game& game, Player player,
                       const CompletionOptions& options) {
  Completer completer(game, options);
  AuditResult result;
  for (const RepeatedGameRecord& record : records) {
    for (size_t m = 0; m < record.matches.size(); ++m) {
      for (const QueryRecord& q : record.matches[m].queries) {
        if (q.player != player) continue;
        PartialStrategy single{player, {}};
        single.strategy.Set(q.infoset, q.policy);
        const double eps = completer.Run(single).exploitability;
        if (eps > result.epsilon) {
          result.epsilon = eps;
          result.witness = "seed " + std::to_string(record.seed) + " match " +
                           std::to_string(m) + ": answer " +
                           FormatPolicy(q.policy) + " at " + q.infoset +
                           " extends to no better than a " +
                           std::to_string(eps) + "-equilibrium";
        }
      }
    }
  }
  return result;
}

AuditResult AuditGlobal(const std::vector<RepeatedGameRecord>& records,
                        const Game& game, Player player,
                        const CompletionOptions& options) {
  Completer completer(game, options);
  AuditResult result;
  for (const RepeatedGameRecord& record : records) {
    PartialStrategy merged{player, {}};
    for (size_t m = 0; m < record.matches.size(); ++m) {
      bool changed = m == 0;
      for (const QueryRecord& q : record.matches[m].queries) {
        if (q.player != player) continue;
        if (const auto* seen = merged.strategy.Find(q.infoset)) {
          if (!SamePolicy(*seen, q.policy)) {
            result.epsilon = completer.utility_range();
            result.witness = "seed " + std::to_string(record.seed) +
                             " match " + std::to_string(m) + ": infostate " +
                             q.infoset + " answered " + FormatPolicy(*seen) +
                             " and later " + FormatPolicy(q.policy);
            return result;
          }
          continue;
        }
        merged.strategy.Set(q.infoset, q.policy);
        changed = true;
      }
      if (!changed) continue;
      const double eps = completer.Run(merged).exploitability;
      if (eps > result.epsilon) {
        result.epsilon = eps;
        result.witness = "seed " + std::to_string(record.seed) +
                         ", answers of matches 0.." + std::to_string(m) +
                         " complete to no better than a " +
                         std::to_string(eps) + "-equilibrium";
      }
    }
  }
  return result;
}

AuditResult AuditStrongGlobal(const OnlineAlgorithm& alg, const Game& game,
                              Player player, const StrongProbes& probes) {
  const GameTree tree = GameTree::Build(game);
  std::vector<std::vector<std::string>> orders = probes.orders;
  if (orders.empty()) orders.push_back(DefaultQueryOrder(tree, player));

  AuditResult result;
  BehavioralStrategy reference;
  std::string reference_name;
  auto disagree = [&](const std::string& where, const std::string& key,
                      const std::vector<double>& a,
                      const std::vector<double>& b) {
    result.epsilon = tree.utility_range();
    result.witness = reference_name + " gives " + FormatPolicy(a) + " at " +
                     key + " but " + where + " gives " + FormatPolicy(b);
  };
  for (size_t o = 0; o < orders.size(); ++o) {
    const BehavioralStrategy s =
        Tabularize(alg, tree, player, orders[o], probes.tabularize);
    if (o == 0) {
      reference = s;
      reference_name = "query order 0";
      continue;
    }
    for (const auto& [key, probs] : reference) {
      if (!SamePolicy(probs, s.At(key))) {
        disagree("query order " + std::to_string(o), key, probs, s.At(key));
        return result;
      }
    }
  }
  for (const RepeatedGameRecord& record : probes.rollouts) {
    for (size_t m = 0; m < record.matches.size(); ++m) {
      for (const QueryRecord& q : record.matches[m].queries) {
        if (q.player != player) continue;
        const std::vector<double>& expected = reference.At(q.infoset);
        if (!SamePolicy(expected, q.policy)) {
          disagree("seed " + std::to_string(record.seed) + " match " +
                       std::to_string(m),
                   q.infoset, expected, q.policy);
          return result;
        }
      }
    }
  }
  result.epsilon =
      Exploitability(tree, CachedGameValue(game).value,
                     tree.ToTabular(player, reference), player);
  return result;
}

std::string LevelName(ConsistencyLevel level) {
  switch (level) {
    case ConsistencyLevel::kNone:
      return "none";
    case ConsistencyLevel::kLocal:
      return "local";
    case ConsistencyLevel::kGlobal:
      return "global";
    case ConsistencyLevel::kStrongGlobal:
      return "strong_global";
  }
  return "none";
}

ConsistencyAudit Audit(const std::vector<RepeatedGameRecord>& records,
                       const Game& game, const AuditRequest& request) {
  ConsistencyAudit audit;
  const double bar = request.epsilon + audit.uncertainty;
  const AuditResult local = AuditLocal(records, game, request.player);
  audit.epsilon_local = local.epsilon;
  audit.witness = local.witness;
  if (local.epsilon <= bar) audit.level_achieved = ConsistencyLevel::kLocal;
  if (request.level == ConsistencyLevel::kLocal) return audit;

  const AuditResult global = AuditGlobal(records, game, request.player);
  audit.has_global = true;
  audit.epsilon_global = global.epsilon;
  if (!global.witness.empty()) audit.witness = global.witness;
  if (audit.level_achieved == ConsistencyLevel::kLocal && global.epsilon <= bar) {
    audit.level_achieved = ConsistencyLevel::kGlobal;
  }
  if (request.level == ConsistencyLevel::kGlobal) return audit;

  if (request.alg == nullptr) {
    throw UsageError("the strong level needs the audited algorithm");
  }
  StrongProbes probes = request.probes;
  probes.rollouts.insert(probes.rollouts.end(), records.begin(), records.end());
  const AuditResult strong =
      AuditStrongGlobal(*request.alg, game, request.player, probes);
  audit.has_strong = true;
  audit.epsilon_strong = strong.epsilon;
  if (!strong.witness.empty()) audit.witness = strong.witness;
  if (audit.level_achieved == ConsistencyLevel::kGlobal && strong.epsilon <= bar) {
    audit.level_achieved = ConsistencyLevel::kStrongGlobal;
  }
  return audit;
}

}  // namespace soundlab
