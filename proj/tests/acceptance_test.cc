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


// Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers as
// arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "oracles/brute_force.h"
#include "oracles/kuhn_sequence_form.h"
#include "soundlab/arena.h"
#include "soundlab/consistency.h"
#include "soundlab/equilibrium.h"
#include "soundlab/experiments.h"
#include "soundlab/games.h"
#include "soundlab/online.h"
#include "soundlab/solvers.h"
#include "test_util.h"

namespace soundlab {
namespace {

struct CriterionResult {
  bool pass = true;
  std::string detail;

  void Require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += " FAILED[" + what + "]";
    }
  }
  void Note(const std::string& text) { detail += " " + text; }
};

std::string Num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

CriterionResult AnalyticOracle() {
  CriterionResult o;
  const auto start = std::chrono::steady_clock::now();
  auto cmp = MakeCoordinatedMatchingPennies();
  const GameTree tree = GameTree::Build(*cmp);
  const double value = CachedGameValue(*cmp).value;
  double worst = 0.0;
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; j <= 20; ++j) {
      const double p = i / 20.0, q = j / 20.0;
      const double e =
          Exploitability(tree, value, tree.ToTabular(kPlayer2, CmpStrategy(p, q)), kPlayer2);
      worst = std::max(worst, std::abs(e - oracles::CmpExploitability(p, q)));
    }
  }
  const double secs = Seconds(start);
  o.Require(worst <= 1e-9, "max error " + Num(worst));
  o.Require(secs < 1.0, "runtime " + Num(secs) + "s");
  o.Note("max_error=" + Num(worst) + " runtime_s=" + Num(secs));
  return o;
}

CriterionResult Counterexample() {
  CriterionResult o;
  auto cmp = MakeCoordinatedMatchingPennies();
  const double e1 = Exploitability(*cmp, CmpStrategy(1.0, 0.0), kPlayer2);
  const double e2 = Exploitability(*cmp, CmpStrategy(0.5, 0.5), kPlayer2);
  const double composed = Exploitability(*cmp, CmpStrategy(1.0, 0.5), kPlayer2);
  o.Require(e1 == 0.0 && e2 == 0.0, "equilibria not exact");
  o.Require(std::abs(composed - 0.5) <= 1e-9, "composed " + Num(composed));
  o.Note("sigma1=" + Num(e1) + " sigma2=" + Num(e2) + " composed=" + Num(composed));
  return o;
}

CriterionResult PlayCacheFirstMatch() {
  CriterionResult o;
  std::shared_ptr<const Game> cmp = MakeCoordinatedMatchingPennies();
  FixedPlayer heads(CmpPlayer1Strategy(1.0), "heads");
  PlayCache cache;
  // Both chance branches are sampled many times; every realization is -1,
  // so the expectation is exactly -1.
  const auto records = RunRepeated(*cmp, {&heads, &cache}, 1, SeedRange(3, 2000));
  std::set<std::vector<WorldId>> terminals;
  bool all_lost = true;
  for (const auto& r : records) {
    all_lost = all_lost && r.AverageReward(kPlayer2) == -1.0;
    terminals.insert(r.matches[0].history.worlds);
  }
  o.Require(all_lost && terminals.size() == 2, "first-match reward not -1 on every branch");
  const std::string s1 = ResolveInfoStateKey(*cmp, "s1");
  const std::string s2 = ResolveInfoStateKey(*cmp, "s2");
  const BehavioralStrategy a = Tabularize(cache, *cmp, kPlayer2, {s1, s2});
  const BehavioralStrategy b = Tabularize(cache, *cmp, kPlayer2, {s2, s1});
  const double ea = Exploitability(*cmp, a, kPlayer2);
  const double eb = Exploitability(*cmp, b, kPlayer2);
  o.Require(a.At(s1) == std::vector<double>{1, 0} && a.At(s2) == std::vector<double>{0, 1},
            "order s1,s2 is not (p=1, q=0)");
  o.Require(b.At(s1) == std::vector<double>{0, 1} && b.At(s2) == std::vector<double>{1, 0},
            "order s2,s1 is not (p=0, q=1)");
  o.Require(ea == 0.0 && eb == 0.0 && !(a == b), "orders");
  o.Note("first_match_reward=-1 expl(s1,s2)=" + Num(ea) + " expl(s2,s1)=" + Num(eb));
  return o;
}

CriterionResult ResponseCertification() {
  CriterionResult o;
  std::shared_ptr<const Game> cmp = MakeCoordinatedMatchingPennies();
  PlayCache cache;
  const auto start = std::chrono::steady_clock::now();
  ResponseGame g(cmp, cache, kPlayer2);
  const double brv1 = g.Brv(1);
  o.Require(brv1 == 1.0, "brv(G1)=" + Num(brv1));
  std::string list;
  for (int k = 1; k <= 4; ++k) {
    const double b = g.Brv(k);
    list += (k > 1 ? "," : "") + Num(b);
    o.Require(b <= 4.0 + 1e-9, "brv(G" + std::to_string(k) + ")=" + Num(b));
  }
  const double secs = Seconds(start);
  o.Require(secs < 10.0, "runtime " + Num(secs) + "s");
  Rng rng(99);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const BehavioralStrategy sigma = CmpStrategy(rng.Uniform(), rng.Uniform());
    const double e = Exploitability(*cmp, sigma, kPlayer2);
    FixedPlayer fixed(sigma);
    ResponseGame rg(cmp, fixed, kPlayer2);
    for (int k = 1; k <= 3; ++k) worst = std::max(worst, std::abs(rg.Brv(k) - k * e));
  }
  o.Require(worst <= 1e-9, "fixed player brv error " + Num(worst));
  o.Note("playcache_brv_k1..4=" + list + " runtime_s=" + Num(secs) +
         " fixed_max_error=" + Num(worst));
  return o;
}

CriterionResult CmpExperiment() {
  CriterionResult o;
  ExperimentConfig config = DefaultOosConfig("cmp");
  config.seeds = 1000;
  config.targets = {{"s1", 0.5}, {"s2", 1.0}};
  const int64_t final_iteration = config.solver.iterations;
  const auto start = std::chrono::steady_clock::now();
  const ExperimentReport report = ExperimentOosCmp(config);
  const double tab = report.Mean("tabularized", final_iteration);
  const double b1 = report.Mean("biased:s1", final_iteration);
  const double b2 = report.Mean("biased:s2", final_iteration);
  const double unbiased = report.Mean("unbiased", final_iteration);
  o.Require(tab >= 0.10 && tab <= 0.24, "tabularized " + Num(tab));
  o.Require(b1 <= 0.02 && b2 <= 0.02, "biased curves");
  o.Require(unbiased <= 0.02, "unbiased " + Num(unbiased));
  o.Note("seeds=1000 iterations=" + std::to_string(final_iteration) +
         " tabularized=" + Num(tab) + " biased_s1=" + Num(b1) + " biased_s2=" + Num(b2) +
         " unbiased=" + Num(unbiased) + " runtime_s=" + Num(Seconds(start)));
  return o;
}

CriterionResult KuhnExperiment() {
  CriterionResult o;
  ExperimentConfig config = DefaultOosConfig("kuhn");
  config.seeds = 40;
  config.targets = {{"J", 0.0}, {"Q", 0.5}, {"K", 1.0}};
  const int64_t final_iteration = config.solver.iterations;
  const ExperimentReport report = ExperimentOosKuhn(config);
  const double tab = report.Mean("tabularized", final_iteration);
  double worst = 0.0;
  for (const std::string t : {"J", "Q", "K"}) {
    worst = std::max(worst, report.Mean("biased:" + t, final_iteration));
  }
  o.Require(tab > worst, "tabularized " + Num(tab) + " <= worst biased " + Num(worst));

  auto kuhn = MakeKuhnPoker();
  const StrategyProfile cfr = RunCfr(*kuhn, 100000);
  const double e1 = Exploitability(*kuhn, cfr[kPlayer1], kPlayer1);
  const double e2 = Exploitability(*kuhn, cfr[kPlayer2], kPlayer2);
  o.Require(e1 <= 0.01 && e2 <= 0.01, "cfr exploitability");
  const GameValueCertificate& cert = CachedGameValue(*kuhn);
  const double oracle = oracles::KuhnValue();
  o.Require(cert.residual <= 1e-3, "residual " + Num(cert.residual));
  o.Require(std::abs(cert.value - oracle) <= 1e-3, "value " + Num(cert.value));
  o.Note("seeds=40 tabularized=" + Num(tab) + " worst_biased=" + Num(worst) +
         " cfr_1e5_expl=" + Num(e1) + "," + Num(e2) + " value=" + Num(cert.value) +
         " sequence_form=" + Num(oracle) + " residual=" + Num(cert.residual));
  return o;
}

std::vector<RepeatedGameRecord> Play(const Game& game, const OnlineAlgorithm& a,
                                     const OnlineAlgorithm& b, int k, int seeds,
                                     uint64_t master) {
  return RunRepeated(game, {&a, &b}, k, SeedRange(master, seeds));
}

CriterionResult Hierarchy() {
  CriterionResult o;
  std::shared_ptr<const Game> cmp = MakeCoordinatedMatchingPennies();
  FixedPlayer u1(CmpPlayer1Strategy(0.5));

  // Hierarchy on every record logged here.
  OosOptions oos_options;
  oos_options.solver.iterations = 5000;
  OosPlayer oos(cmp, oos_options);
  PlayCache cache;
  RoundRobinPlayer rr;
  FixedPlayer composed(CmpStrategy(1.0, 0.5));
  FixedPlayer eq(CmpStrategy(0.3, 0.7));
  int audited = 0;
  for (const OnlineAlgorithm* alg :
       std::vector<const OnlineAlgorithm*>{&oos, &cache, &rr, &composed, &eq}) {
    AuditRequest request;
    request.player = kPlayer2;
    request.level = ConsistencyLevel::kStrongGlobal;
    request.alg = alg;
    for (int k : {1, 3, 8}) {
      const ConsistencyAudit a = Audit(Play(*cmp, u1, *alg, k, 4, k), *cmp, request);
      ++audited;
      o.Require(a.epsilon_local <= a.epsilon_global &&
                    a.epsilon_global <= a.epsilon_strong + 1e-3,
                "hierarchy for " + alg->Name());
    }
  }

  // The composed player: every answer extends to an equilibrium, yet each
  // match concedes 0.5.
  const double local = AuditLocal(Play(*cmp, u1, composed, 20, 20, 7), *cmp, kPlayer2).epsilon;
  ResponseGame rg(cmp, composed, kPlayer2);
  const double per_match = rg.Brv(1);
  o.Require(local == 0.0, "composed local " + Num(local));
  o.Require(std::abs(per_match - 0.5) <= 1e-9, "composed brv " + Num(per_match));

  // L,X composition.
  auto lx = MakePerfectInfoLxGame();
  const std::string top = ResolveInfoStateKey(*lx, "top");
  const std::string after_l = ResolveInfoStateKey(*lx, "afterL");
  const std::string after_r = ResolveInfoStateKey(*lx, "afterR");
  BehavioralStrategy lx_comp, perfect;
  lx_comp.Set(top, {1, 0});
  lx_comp.Set(after_l, {0, 1});
  lx_comp.Set(after_r, {0, 1});
  perfect.Set(top, {1, 0});
  perfect.Set(after_l, {1, 0});
  perfect.Set(after_r, {0, 1});
  FixedPlayer idle(BehavioralStrategy{});
  const double lx_local = AuditLocal(Play(*lx, FixedPlayer(lx_comp), idle, 3, 2, 1), *lx,
                                     kPlayer1).epsilon;
  const double lx_expl = Exploitability(*lx, lx_comp, kPlayer1);
  const double perfect_expl = Exploitability(*lx, perfect, kPlayer1);
  o.Require(lx_local == 0.0 && lx_expl > 0.0, "L,X composition");
  o.Require(perfect_expl == 0.0, "subgame-perfect player");

  // Stateless players: global equals strong global once every infostate has
  // been observed.
  Rng rng(31);
  double gap = 0.0;
  int stateless = 0;
  for (const std::string name : {"cmp", "kuhn", "mp"}) {
    auto game = MakeGame(name);
    const GameTree tree = GameTree::Build(*game);
    for (Player seat : {kPlayer1, kPlayer2}) {
      for (int trial = 0; trial < 3; ++trial) {
        FixedPlayer alg(tree.FromTabular(seat, testing_util::RandomPolicy(tree, seat, rng)));
        FixedPlayer opp(tree.FromTabular(Opponent(seat), tree.UniformPolicy(Opponent(seat))));
        const auto records = seat == kPlayer1 ? Play(*game, alg, opp, 80, 2, trial)
                                              : Play(*game, opp, alg, 80, 2, trial);
        const double global = AuditGlobal(records, *game, seat).epsilon;
        const double strong = AuditStrongGlobal(alg, *game, seat, {}).epsilon;
        gap = std::max(gap, std::abs(global - strong));
        ++stateless;
      }
    }
  }
  o.Require(gap <= 1e-6, "stateless gap " + Num(gap));
  o.Note("records_audited=" + std::to_string(audited) + " composed_local=" + Num(local) +
         " composed_brv=" + Num(per_match) + " lx_local=" + Num(lx_local) +
         " lx_expl=" + Num(lx_expl) + " subgame_perfect_expl=" + Num(perfect_expl) +
         " stateless_players=" + std::to_string(stateless) + " max_gap=" + Num(gap));
  return o;
}

// Sequence-form average of the per-iteration policies, weighted by the
// player's own reach.
class ReachAverage {
 public:
  ReachAverage(const GameTree& tree, Player p) : tree_(tree), p_(p) {
    const int n = tree.num_infosets(p);
    sum_.resize(n);
    for (int i = 0; i < n; ++i) sum_[i].assign(tree.infoset(p, i).num_actions, 0.0);
  }

  void Add(const TabularPolicy& policy) {
    std::vector<double> reach(sum_.size(), -1.0);
    std::function<double(int)> reach_of = [&](int i) {
      if (reach[i] >= 0.0) return reach[i];
      const InfosetInfo& info = tree_.infoset(p_, i);
      reach[i] = info.parent_infoset < 0
                     ? 1.0
                     : reach_of(info.parent_infoset) *
                           policy[info.parent_infoset][info.parent_action];
      return reach[i];
    };
    for (size_t i = 0; i < sum_.size(); ++i) {
      const double r = reach_of(static_cast<int>(i));
      for (size_t a = 0; a < sum_[i].size(); ++a) sum_[i][a] += r * policy[i][a];
    }
  }

  TabularPolicy Policy() const {
    TabularPolicy out = sum_;
    for (auto& probs : out) {
      double total = 0.0;
      for (double x : probs) total += x;
      for (double& x : probs) x = total > 0.0 ? x / total : 1.0 / probs.size();
    }
    return out;
  }

 private:
  const GameTree& tree_;
  Player p_;
  TabularPolicy sum_;
};

// Overall regret over k iterations, measured from the iterates alone, against
// the average-strategy exploitability.
bool RegretBound(const std::string& game_name, std::string& detail) {
  auto game = MakeGame(game_name);
  auto tree = std::make_shared<const GameTree>(GameTree::Build(*game));
  const double value = CachedGameValue(*game).value;
  CfrSolver solver(tree);
  ReachAverage avg1(*tree, kPlayer1), avg2(*tree, kPlayer2);
  double utility_sum = 0.0;
  bool ok = true;
  int64_t done = 0;
  for (int64_t k : {int64_t{100}, int64_t{1000}, int64_t{10000}}) {
    for (; done < k; ++done) {
      const std::array<TabularPolicy, kNumPlayers> current = {
          solver.CurrentPolicy(kPlayer1), solver.CurrentPolicy(kPlayer2)};
      utility_sum += TreeExpectedUtility(*tree, current);
      avg1.Add(current[kPlayer1]);
      avg2.Add(current[kPlayer2]);
      solver.Iterate(1);
    }
    const double r1 = k * BestResponseOnTree(*tree, kPlayer1, avg2.Policy()).value - utility_sum;
    const double r2 = k * BestResponseOnTree(*tree, kPlayer2, avg1.Policy()).value + utility_sum;
    const double bound = (r1 + r2) / (2.0 * k);
    const double expl = 0.5 * (Exploitability(*tree, value, solver.AveragePolicy(kPlayer1),
                                              kPlayer1) +
                               Exploitability(*tree, value, solver.AveragePolicy(kPlayer2),
                                              kPlayer2));
    ok = ok && bound >= expl - 1e-9;
    detail += " " + game_name + "@" + std::to_string(k) + ":R/2k=" + Num(bound) +
              ",expl=" + Num(expl);
  }
  return ok;
}

CriterionResult RegretOverIterations() {
  CriterionResult o;
  std::string detail;
  // Uniform play is already an equilibrium of CMP, so its runs are flat;
  // Kuhn is checked as well to exercise a moving average.
  o.Require(RegretBound("cmp", detail), "cmp bound");
  o.Require(RegretBound("kuhn", detail), "kuhn bound");
  o.Note(detail.substr(1));
  return o;
}

CriterionResult EmpiricalBound() {
  CriterionResult o;
  std::shared_ptr<const Game> cmp = MakeCoordinatedMatchingPennies();
  PlayCache cache;
  auto response = std::make_shared<ResponseGame>(cmp, cache, kPlayer2);
  RunOptions options;
  options.record_queries = false;
  options.record_theta = false;
  const int seeds = 10000;
  double worst_margin = 1e300;
  int worst_k = 0;
  for (int k = 1; k <= 100; ++k) {
    BestResponseAdversary adversary(response, k);
    const auto records = RunRepeated(*cmp, {&adversary, &cache}, k,
                                     SeedRange(static_cast<uint64_t>(k), seeds), options);
    double sum = 0.0, sq = 0.0;
    for (const auto& r : records) {
      const double x = r.AverageReward(kPlayer2);
      sum += x;
      sq += x * x;
    }
    const double mean = sum / seeds;
    const double se = std::sqrt(std::max(0.0, sq / seeds - mean * mean) / seeds);
    const double margin = mean - (-4.0 / k - 3.0 * se);
    if (margin < worst_margin) {
      worst_margin = margin;
      worst_k = k;
    }
    if (margin < 0.0) o.Require(false, "k=" + std::to_string(k) + " mean " + Num(mean));
    if (k == 1 || k == 10 || k == 100) {
      o.Note("k=" + std::to_string(k) + ":mean=" + Num(mean) + ",se=" + Num(se) +
             ",exact=" + Num(-response->Brv(k) / k));
    }
  }
  o.Note("seeds=10000 tightest_k=" + std::to_string(worst_k) +
         " tightest_margin=" + Num(worst_margin));
  return o;
}

}  // namespace
}  // namespace soundlab

int main(int argc, char** argv) {
  using soundlab::CriterionResult;
  const std::vector<std::pair<int, std::function<CriterionResult()>>> criteria = {
      {1, soundlab::AnalyticOracle},       {2, soundlab::Counterexample},
      {3, soundlab::PlayCacheFirstMatch},  {4, soundlab::ResponseCertification},
      {5, soundlab::CmpExperiment},        {6, soundlab::KuhnExperiment},
      {7, soundlab::Hierarchy},            {8, soundlab::RegretOverIterations},
      {9, soundlab::EmpiricalBound},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));
  bool all = true;
  for (const auto& [id, run] : criteria) {
    if (!only.empty() && !only.count(id)) continue;
    CriterionResult outcome;
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string(" exception: ") + e.what();
    }
    std::cout << "criterion " << id << ": " << (outcome.pass ? "PASS" : "FAIL")
              << outcome.detail << std::endl;
    all = all && outcome.pass;
  }
  return all ? 0 : 1;
}
