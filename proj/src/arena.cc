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

#include "soundlab/arena.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

#include "soundlab/equilibrium.h"
#include "soundlab/error.h"
#include "soundlab/parallel.h"

namespace soundlab {
namespace {

int SampleFrom(const std::vector<double>& probs, double u) {
  double acc = 0.0;
  int last = 0;
  for (size_t a = 0; a < probs.size(); ++a) {
    if (probs[a] <= 0.0) continue;
    last = static_cast<int>(a);
    acc += probs[a];
    if (u < acc) return last;
  }
  return last;
}

void CheckDistribution(const std::vector<double>& probs, int n,
                       const std::string& key) {
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw NumericalError("negative probability at " + key);
    total += p;
  }
  if (static_cast<int>(probs.size()) != n || std::abs(total - 1.0) > 1e-9) {
    throw NumericalError("algorithm returned an invalid distribution at " +
                         key);
  }
}

std::string FormatDouble(double x, const char* format = "%.17g") {
  char buf[40];
  std::snprintf(buf, sizeof(buf), format, x);
  return buf;
}

}  // namespace

double RepeatedGameRecord::AverageReward(Player player) const {
  if (matches.empty()) return 0.0;
  double total = 0.0;
  for (const MatchLog& m : matches) total += m.reward1;
  const double avg = total / static_cast<double>(matches.size());
  return player == kPlayer1 ? avg : -avg;
}

MatchLog PlayMatch(const Game& game, const AlgorithmPair& algs,
                   const std::array<AlgorithmState*, kNumPlayers>& thetas,
                   Rng& rng, bool log_queries) {
  MatchLog log;
  WorldId world = game.InitialWorld();
  log.history = History(world);
  std::array<InfoState, kNumPlayers> states{
      InfoState(kPlayer1, game.InitialObservation()),
      InfoState(kPlayer2, game.InitialObservation())};
  std::array<double, kNumPlayers> rewards{0.0, 0.0};
  while (!game.IsTerminal(world)) {
    JointAction action{0, 0};
    for (Player p = 0; p < kNumPlayers; ++p) {
      const int n = game.NumActions(world, p);
      if (n < 2) continue;
      std::vector<double> dist = algs[p]->Act(states[p], n, *thetas[p]);
      CheckDistribution(dist, n, states[p].key());
      action[p] = SampleFrom(dist, rng.Uniform());
      if (log_queries) {
        log.queries.push_back({p, states[p].key(), std::move(dist)});
      }
    }
    const std::vector<Outcome> outcomes = game.Transition(world, action);
    WorldId next = outcomes.front().world;
    if (outcomes.size() > 1) {
      std::vector<double> probs;
      for (const Outcome& o : outcomes) probs.push_back(o.probability);
      next = outcomes[SampleFrom(probs, rng.Uniform())].world;
    }
    for (Player p = 0; p < kNumPlayers; ++p) {
      rewards[p] += game.Reward(world, action, p);
    }
    const Observation obs = game.Observe(world, action, next);
    for (Player p = 0; p < kNumPlayers; ++p) states[p].Extend(action[p], obs);
    log.history.Append(action, next);
    world = next;
  }
  for (Player p = 0; p < kNumPlayers; ++p) {
    algs[p]->OnMatchEnd(states[p], rewards[p], *thetas[p]);
  }
  log.reward1 = rewards[kPlayer1];
  return log;
}

std::vector<RepeatedGameRecord> RunRepeated(const Game& game,
                                            const AlgorithmPair& algs, int k,
                                            const std::vector<uint64_t>& seeds,
                                            const RunOptions& options) {
  if (k < 1) throw RangeError("k must be at least 1");
  std::vector<RepeatedGameRecord> records(seeds.size());
  ParallelFor(static_cast<int64_t>(seeds.size()), options.jobs, [&](int64_t i) {
    RepeatedGameRecord& record = records[i];
    record.seed = seeds[i];
    Rng rng(DeriveSeed(seeds[i], 0));
    std::unique_ptr<AlgorithmState> t1 = algs[0]->InitialState(DeriveSeed(seeds[i], 1));
    std::unique_ptr<AlgorithmState> t2 = algs[1]->InitialState(DeriveSeed(seeds[i], 2));
    record.matches.reserve(k);
    for (int m = 0; m < k; ++m) {
      std::array<std::string, kNumPlayers> before;
      if (options.record_theta) before = {t1->Serialize(), t2->Serialize()};
      record.matches.push_back(
          PlayMatch(game, algs, {t1.get(), t2.get()}, rng, options.record_queries));
      record.matches.back().theta_before = std::move(before);
    }
  });
  return records;
}

class ResponseGame::Expander {
 public:
  Expander(ResponseGame& rg, Expansion& out)
      : rg_(rg), game_(*rg.game_), out_(out), me_(rg.alg_player_),
        adv_(rg.adversary()) {}

  void Run(const std::vector<Atom>& atoms) {
    const InfoState s1(kPlayer1, game_.InitialObservation());
    const InfoState s2(kPlayer2, game_.InitialObservation());
    if (atoms.size() == 1) {
      Node(game_.InitialWorld(), {s1, s2}, atoms[0].theta->Clone(), 1.0,
           {0.0, 0.0});
    } else {
      std::vector<double> probs;
      for (const Atom& a : atoms) probs.push_back(a.prob);
      const int root = out_.tree.AddChance(probs);
      for (size_t i = 0; i < atoms.size(); ++i) {
        out_.tree.SetChild(root, static_cast<int>(i),
                           Node(game_.InitialWorld(), {s1, s2},
                                atoms[i].theta->Clone(), atoms[i].prob,
                                {0.0, 0.0}));
      }
    }
    out_.tree.Finalize();
    for (auto& [group, thetas] : groups_) {
      double total = 0.0;
      for (const auto& [ser, atom] : thetas) total += atom.prob;
      std::vector<Atom> posterior;
      for (auto& [ser, atom] : thetas) {
        posterior.push_back({atom.prob / total, std::move(atom.theta)});
      }
      out_.posterior[group] = rg_.Intern(std::move(posterior));
    }
  }

 private:
  using States = std::array<InfoState, kNumPlayers>;
  using Rewards = std::array<double, kNumPlayers>;

  void Charge() {
    if (rg_.nodes_ + out_.tree.num_nodes() >= rg_.budget_) {
      throw BudgetExceededError("response game exceeds " +
                                std::to_string(rg_.budget_) + " nodes");
    }
  }

  int Node(WorldId world, const States& states,
           std::unique_ptr<AlgorithmState> theta, double reach,
           const Rewards& rewards) {
    Charge();
    if (game_.IsTerminal(world)) {
      const int id = out_.tree.AddTerminal(0.0);
      rg_.alg_.OnMatchEnd(states[me_], rewards[me_], *theta);
      const std::string group = GroupKey(states[adv_].key(), rewards[adv_]);
      out_.leaves.push_back({id, rewards[adv_], group});
      Atom& slot = groups_[group][theta->Serialize()];
      if (!slot.theta) slot.theta = std::move(theta);
      slot.prob += reach;
      return id;
    }
    const int n = game_.NumActions(world, adv_);
    if (n < 2) return AlgorithmStep(world, states, std::move(theta), reach, rewards, 0);
    const int id = out_.tree.AddDecision(adv_, states[adv_].key(), n);
    for (int a = 0; a < n; ++a) {
      out_.tree.SetChild(
          id, a, AlgorithmStep(world, states, theta->Clone(), reach, rewards, a));
    }
    return id;
  }

  int AlgorithmStep(WorldId world, const States& states,
                    std::unique_ptr<AlgorithmState> theta, double reach,
                    const Rewards& rewards, ActionId adv_action) {
    JointAction action{0, 0};
    action[adv_] = adv_action;
    const int n = game_.NumActions(world, me_);
    if (n < 2) return Resolve(world, states, std::move(theta), reach, rewards, action);
    Charge();
    const std::vector<double> dist = rg_.alg_.Act(states[me_], n, *theta);
    CheckDistribution(dist, n, states[me_].key());
    const int id = out_.tree.AddChance(dist);
    for (int b = 0; b < n; ++b) {
      action[me_] = b;
      const int child =
          dist[b] > 0.0 ? Resolve(world, states, theta->Clone(), reach * dist[b],
                                  rewards, action)
                        : out_.tree.AddTerminal(0.0);
      out_.tree.SetChild(id, b, child);
    }
    return id;
  }

  int Resolve(WorldId world, const States& states,
              std::unique_ptr<AlgorithmState> theta, double reach,
              Rewards rewards, const JointAction& action) {
    for (Player p = 0; p < kNumPlayers; ++p) {
      rewards[p] += game_.Reward(world, action, p);
    }
    const std::vector<Outcome> outcomes = game_.Transition(world, action);
    auto next_states = [&](WorldId next) {
      States out = states;
      const Observation obs = game_.Observe(world, action, next);
      for (Player p = 0; p < kNumPlayers; ++p) out[p].Extend(action[p], obs);
      return out;
    };
    if (outcomes.size() == 1) {
      return Node(outcomes[0].world, next_states(outcomes[0].world),
                  std::move(theta), reach, rewards);
    }
    Charge();
    std::vector<double> probs;
    for (const Outcome& o : outcomes) probs.push_back(o.probability);
    const int id = out_.tree.AddChance(probs);
    for (size_t i = 0; i < outcomes.size(); ++i) {
      const Outcome& o = outcomes[i];
      const int child =
          o.probability > 0.0
              ? Node(o.world, next_states(o.world), theta->Clone(),
                     reach * o.probability, rewards)
              : out_.tree.AddTerminal(0.0);
      out_.tree.SetChild(id, static_cast<int>(i), child);
    }
    return id;
  }

  ResponseGame& rg_;
  const Game& game_;
  Expansion& out_;
  Player me_;
  Player adv_;
  std::map<std::string, std::map<std::string, Atom>> groups_;
};

ResponseGame::ResponseGame(std::shared_ptr<const Game> game,
                           const OnlineAlgorithm& alg, Player alg_player,
                           int64_t node_budget)
    : game_(std::move(game)),
      alg_(alg),
      alg_player_(alg_player),
      budget_(node_budget) {
  const auto support = alg.InitialStateSupport();
  if (!support) {
    throw NondeterminismError("algorithm " + alg.Name() +
                              " has no finite initial state support");
  }
  std::vector<Atom> atoms;
  for (const auto& [prob, seed] : *support) {
    atoms.push_back({prob, std::shared_ptr<const AlgorithmState>(
                               alg.InitialState(seed))});
  }
  initial_ = Intern(std::move(atoms));
}

std::string ResponseGame::GroupKey(const std::string& terminal_infoset,
                                   double reward) {
  return terminal_infoset + "|" + FormatDouble(reward);
}

std::string ResponseGame::Intern(std::vector<Atom> atoms) {
  std::map<std::string, Atom> merged;
  for (Atom& a : atoms) {
    Atom& slot = merged[a.theta->Serialize()];
    if (!slot.theta) slot.theta = std::move(a.theta);
    slot.prob += a.prob;
  }
  std::string key;
  std::vector<Atom> canonical;
  for (auto& [ser, atom] : merged) {
    key += FormatDouble(atom.prob, "%.12f") + "#" + std::to_string(ser.size()) +
           ":" + ser + ";";
    canonical.push_back(std::move(atom));
  }
  beliefs_.try_emplace(key, std::move(canonical));
  return key;
}

ResponseGame::Expansion& ResponseGame::Expand(const std::string& belief) {
  if (auto it = expansions_.find(belief); it != expansions_.end()) {
    return it->second;
  }
  Expansion& e = expansions_[belief];
  try {
    Expander(*this, e).Run(beliefs_.at(belief));
  } catch (...) {
    expansions_.erase(belief);
    throw;
  }
  nodes_ += e.tree.num_nodes();
  return e;
}

double ResponseGame::Solve(const std::string& belief, int remaining) {
  if (remaining <= 0) return 0.0;
  if (auto it = solved_.find({belief, remaining}); it != solved_.end()) {
    return it->second.value;
  }
  Expansion& e = Expand(belief);
  std::map<std::string, double> continuation;
  for (const auto& [group, posterior] : e.posterior) {
    continuation[group] = Solve(posterior, remaining - 1);
  }
  const Player adv = adversary();
  for (const Leaf& leaf : e.leaves) {
    const double u = leaf.reward + continuation.at(leaf.group);
    e.tree.SetTerminalUtility(leaf.node, adv == kPlayer1 ? u : -u);
  }
  const TabularPolicy none(e.tree.num_infosets(alg_player_));
  const TreeBestResponse br = BestResponseOnTree(e.tree, adv, none);
  Solved solved{br.value, {}};
  for (int i = 0; i < e.tree.num_infosets(adv); ++i) {
    const std::vector<double>& p = br.policy[i];
    solved.policy[e.tree.infoset(adv, i).key] = static_cast<ActionId>(
        std::max_element(p.begin(), p.end()) - p.begin());
  }
  solved_.emplace(std::make_pair(belief, remaining), std::move(solved));
  return br.value;
}

double ResponseGame::RawValue(int k) {
  if (k < 0) throw RangeError("k must be non-negative");
  return Solve(initial_, k);
}

double ResponseGame::Brv(int k) {
  const double v1 = CachedGameValue(*game_).value;
  const double v_adv = adversary() == kPlayer1 ? v1 : -v1;
  return RawValue(k) - k * v_adv;
}

ActionId ResponseGame::AdversaryAction(const std::string& belief,
                                       int remaining,
                                       const std::string& infoset) const {
  auto it = solved_.find({belief, remaining});
  if (it == solved_.end()) {
    throw SoundlabError("response game not solved for this belief and horizon");
  }
  auto action = it->second.policy.find(infoset);
  return action == it->second.policy.end() ? 0 : action->second;
}

const std::string& ResponseGame::Posterior(const std::string& belief,
                                           const std::string& terminal_infoset,
                                           double reward) const {
  auto it = expansions_.find(belief);
  if (it == expansions_.end()) throw SoundlabError("belief was never expanded");
  auto post = it->second.posterior.find(GroupKey(terminal_infoset, reward));
  if (post == it->second.posterior.end()) {
    throw NondeterminismError("match outcome impossible under the belief");
  }
  return post->second;
}

BestResponseAdversary::BestResponseAdversary(
    std::shared_ptr<ResponseGame> response, int horizon)
    : response_(std::move(response)), horizon_(horizon) {
  if (horizon < 1) throw RangeError("horizon must be at least 1");
  response_->RawValue(horizon);
}

std::unique_ptr<AlgorithmState> BestResponseAdversary::InitialState(
    uint64_t) const {
  auto s = std::make_unique<State>();
  s->belief = response_->initial_belief();
  s->remaining = horizon_;
  return s;
}

std::vector<double> BestResponseAdversary::Act(const InfoState& state,
                                               int num_actions,
                                               AlgorithmState& theta) const {
  auto& s = static_cast<State&>(theta);
  // Past the horizon the adversary keeps playing the last-match policy.
  const int remaining = std::clamp(s.remaining, 1, horizon_);
  std::vector<double> out(num_actions, 0.0);
  out[response_->AdversaryAction(s.belief, remaining, state.key())] = 1.0;
  return out;
}

void BestResponseAdversary::OnMatchEnd(const InfoState& terminal, double reward,
                                       AlgorithmState& theta) const {
  auto& s = static_cast<State&>(theta);
  s.belief = response_->Posterior(s.belief, terminal.key(), reward);
  --s.remaining;
}

SoundnessReport CertifySoundness(ResponseGame& response, int k_max,
                                 double epsilon, double tolerance) {
  if (k_max < 1) throw RangeError("k_max must be at least 1");
  SoundnessReport report;
  report.epsilon = epsilon;
  report.k_max = k_max;
  for (int k = 1; k <= k_max; ++k) {
    report.k_values.push_back(k);
    report.brv.push_back(response.Brv(k));
  }
  report.epsilon_certified.assign(k_max, 0.0);
  report.certified.assign(k_max, false);
  double worst = -std::numeric_limits<double>::infinity();
  bool ok = true;
  for (int i = k_max - 1; i >= 0; --i) {
    const int k = report.k_values[i];
    worst = std::max(worst, report.brv[i] / k);
    ok = ok && report.brv[i] <= k * epsilon + tolerance;
    report.epsilon_certified[i] = worst;
    report.certified[i] = ok;
  }
  report.horizon_note = "bounded horizon: checked for k' <= " +
                        std::to_string(k_max) + " only";
  return report;
}

ShortfallEstimate EstimateShortfall(const Game& game,
                                    const OnlineAlgorithm& alg,
                                    Player alg_player,
                                    const OnlineAlgorithm& adversary, int k,
                                    const std::vector<uint64_t>& seeds,
                                    int jobs) {
  AlgorithmPair algs;
  algs[alg_player] = &alg;
  algs[Opponent(alg_player)] = &adversary;
  RunOptions options;
  options.jobs = jobs;
  options.record_theta = false;
  options.record_queries = false;
  const auto records = RunRepeated(game, algs, k, seeds, options);
  const double v1 = CachedGameValue(game).value;
  const Player adv = Opponent(alg_player);
  const double v_adv = adv == kPlayer1 ? v1 : -v1;
  ShortfallEstimate est;
  est.samples = static_cast<int>(records.size());
  double sum = 0.0, sum_sq = 0.0;
  for (const RepeatedGameRecord& r : records) {
    const double x = k * (r.AverageReward(adv) - v_adv);
    sum += x;
    sum_sq += x * x;
  }
  const double n = static_cast<double>(records.size());
  est.mean = sum / n;
  const double var = n > 1 ? (sum_sq - n * est.mean * est.mean) / (n - 1) : 0.0;
  est.standard_error = std::sqrt(std::max(var, 0.0) / n);
  return est;
}

std::vector<uint64_t> SeedRange(uint64_t master_seed, int count) {
  std::vector<uint64_t> seeds;
  for (int i = 0; i < count; ++i) seeds.push_back(DeriveSeed(master_seed, i));
  return seeds;
}

}  // namespace soundlab
