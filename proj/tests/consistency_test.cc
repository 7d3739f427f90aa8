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


#include <doctest.h>

#include <set>

#include "soundlab/arena.h"
#include "soundlab/consistency.h"
#include "soundlab/equilibrium.h"
#include "soundlab/error.h"
#include "soundlab/games.h"
#include "test_util.h"

namespace soundlab {
namespace {

PartialStrategy Partial(Player p, const Game& game,
                        const std::map<std::string, std::vector<double>>& named) {
  PartialStrategy partial{p, {}};
  for (const auto& [name, probs] : named) {
    partial.strategy.Set(ResolveInfoStateKey(game, name), probs);
  }
  return partial;
}

TEST_CASE("completion on CMP") {
  auto cmp = MakeCoordinatedMatchingPennies();
  const Completion c = CompletionExploitability(*cmp, Partial(kPlayer2, *cmp, {{"s1", {0.3, 0.7}}}));
  CHECK(c.exploitability == 0.0);
  CHECK(c.strategy.At(ResolveInfoStateKey(*cmp, "s2"))[0] == doctest::Approx(0.7));
  CHECK(CompletionExploitability(
            *cmp, Partial(kPlayer2, *cmp, {{"s1", {1, 0}}, {"s2", {0.5, 0.5}}}))
            .exploitability == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(CompletionExploitability(*cmp, PartialStrategy{kPlayer2, {}}).exploitability == 0.0);
  CHECK_THROWS_AS(
      CompletionExploitability(*cmp, Partial(kPlayer2, *cmp, {{"p1", {1, 0}}})),
      RangeError);
}

TEST_CASE("completion matches a grid search over the free infosets") {
  auto kuhn = MakeKuhnPoker();
  const GameTree tree = GameTree::Build(*kuhn);
  const double value = CachedGameValue(*kuhn).value;
  Rng rng(8);
  const TabularPolicy eq = tree.ToTabular(kPlayer1, KuhnAlphaEquilibrium(0.4));
  for (int trial = 0; trial < 6; ++trial) {
    // Pin four infosets near equilibrium play, leave two free.
    const int free_a = static_cast<int>(rng() % 6);
    int free_b = static_cast<int>(rng() % 5);
    if (free_b >= free_a) ++free_b;
    TabularPolicy policy = eq;
    PartialStrategy partial{kPlayer1, {}};
    for (int i = 0; i < 6; ++i) {
      if (i == free_a || i == free_b) continue;
      const double x = std::clamp(eq[i][1] + 0.2 * (rng.Uniform() - 0.5), 0.0, 1.0);
      policy[i] = {1.0 - x, x};
      partial.strategy.Set(tree.infoset(kPlayer1, i).key, policy[i]);
    }
    double grid = 1e300;
    for (int a = 0; a <= 100; ++a) {
      for (int b = 0; b <= 100; ++b) {
        policy[free_a] = {1.0 - a / 100.0, a / 100.0};
        policy[free_b] = {1.0 - b / 100.0, b / 100.0};
        grid = std::min(grid, Exploitability(tree, value, policy, kPlayer1));
      }
    }
    const double exact = CompletionExploitability(*kuhn, partial).exploitability;
    CHECK(exact <= grid + 1e-9);
    CHECK(grid - exact <= 0.02);
  }
}

TEST_CASE("completion on Kuhn pins") {
  auto kuhn = MakeKuhnPoker();
  auto pin = [&](const std::string& name, double bet) {
    return CompletionExploitability(*kuhn, Partial(kPlayer1, *kuhn, {{name, {1 - bet, bet}}}))
        .exploitability;
  };
  CHECK(pin("J", 0.0) == 0.0);
  CHECK(pin("J", 0.2) == 0.0);
  CHECK(pin("Qpb", 0.5) == 0.0);
  CHECK(pin("Q", 0.2) > 0.001);
  CompletionOptions tight;
  tight.max_unfilled = 2;
  CHECK_THROWS_AS(CompletionExploitability(*kuhn, PartialStrategy{kPlayer1, {}}, tight),
                  BudgetExceededError);
}

std::vector<RepeatedGameRecord> Play(const Game& game, const OnlineAlgorithm& p1,
                                     const OnlineAlgorithm& p2, int k, int seeds,
                                     uint64_t master = 1) {
  return RunRepeated(game, {&p1, &p2}, k, SeedRange(master, seeds));
}

TEST_CASE("local audits") {
  auto cmp = MakeCoordinatedMatchingPennies();
  FixedPlayer u1(CmpPlayer1Strategy(0.5));
  FixedPlayer eq(CmpStrategy(0.5, 0.5));
  CHECK(AuditLocal(Play(*cmp, u1, eq, 5, 5), *cmp, kPlayer2).epsilon == 0.0);

  // Only matches through s1, answered with p = 1: sigma1 extends it.
  RepeatedGameRecord r;
  r.seed = 0;
  r.matches.resize(1);
  r.matches[0].queries.push_back(
      {kPlayer2, ResolveInfoStateKey(*cmp, "s1"), {1.0, 0.0}});
  CHECK(AuditLocal({r}, *cmp, kPlayer2).epsilon == 0.0);
  CHECK(AuditGlobal({r}, *cmp, kPlayer2).epsilon == 0.0);
}

TEST_CASE("global audits") {
  auto cmp = MakeCoordinatedMatchingPennies();
  FixedPlayer u1(CmpPlayer1Strategy(0.5));
  PlayCache cache;
  const auto records = Play(*cmp, u1, cache, 20, 10);
  CHECK(AuditGlobal(records, *cmp, kPlayer2).epsilon == 0.0);

  // One match: the global audit is that match's completion.
  const auto single = Play(*cmp, u1, FixedPlayer(CmpStrategy(1.0, 0.5)), 1, 1);
  PartialStrategy partial{kPlayer2, {}};
  for (const auto& q : single[0].matches[0].queries) {
    if (q.player == kPlayer2) partial.strategy.Set(q.infoset, q.policy);
  }
  CHECK(AuditGlobal(single, *cmp, kPlayer2).epsilon ==
        CompletionExploitability(*cmp, partial).exploitability);

  // Round robin answers one infostate two ways.
  RoundRobinPlayer rr;
  const AuditResult conflict = AuditGlobal(Play(*cmp, u1, rr, 6, 3), *cmp, kPlayer2);
  CHECK(conflict.epsilon == 2.0);
  CHECK_FALSE(conflict.witness.empty());
}

TEST_CASE("strong global audits") {
  auto cmp = MakeCoordinatedMatchingPennies();
  CHECK(AuditStrongGlobal(FixedPlayer(CmpStrategy(0.5, 0.5)), *cmp, kPlayer2, {}).epsilon ==
        0.0);
  CHECK(AuditStrongGlobal(FixedPlayer(CmpStrategy(1.0, 0.5)), *cmp, kPlayer2, {}).epsilon ==
        doctest::Approx(0.5).epsilon(1e-12));
  StrongProbes orders;
  orders.orders = {{ResolveInfoStateKey(*cmp, "s1"), ResolveInfoStateKey(*cmp, "s2")},
                   {ResolveInfoStateKey(*cmp, "s2"), ResolveInfoStateKey(*cmp, "s1")}};
  const AuditResult cache = AuditStrongGlobal(PlayCache(), *cmp, kPlayer2, orders);
  CHECK(cache.epsilon == 2.0);
  CHECK(cache.witness.find("query order 1") != std::string::npos);
}

TEST_CASE("a composition of equilibria is locally consistent yet exploitable") {
  std::shared_ptr<const Game> cmp = MakeCoordinatedMatchingPennies();
  FixedPlayer composed(CmpStrategy(1.0, 0.5));
  FixedPlayer u1(CmpPlayer1Strategy(0.5));
  const auto records = Play(*cmp, u1, composed, 10, 10);
  CHECK(AuditLocal(records, *cmp, kPlayer2).epsilon == 0.0);
  ResponseGame rg(cmp, composed, kPlayer2);
  CHECK(rg.Brv(1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("L,X composition versus subgame-perfect play") {
  auto lx = MakePerfectInfoLxGame();
  const std::string top = ResolveInfoStateKey(*lx, "top");
  const std::string after_l = ResolveInfoStateKey(*lx, "afterL");
  const std::string after_r = ResolveInfoStateKey(*lx, "afterR");
  // L from (L, Y, .) and X from the equilibrium (R, X, X), where afterL is
  // off the path.
  BehavioralStrategy lx_comp;
  lx_comp.Set(top, {1, 0});
  lx_comp.Set(after_l, {0, 1});
  lx_comp.Set(after_r, {0, 1});
  FixedPlayer composed(lx_comp);
  FixedPlayer idle(BehavioralStrategy{});
  const auto records = Play(*lx, composed, idle, 3, 2);
  CHECK(AuditLocal(records, *lx, kPlayer1).epsilon == 0.0);
  CHECK(AuditGlobal(records, *lx, kPlayer1).epsilon == doctest::Approx(1.0));
  CHECK(Exploitability(*lx, lx_comp, kPlayer1) == doctest::Approx(1.0));

  // Optimal in every subgame.
  BehavioralStrategy perfect;
  perfect.Set(top, {1, 0});
  perfect.Set(after_l, {1, 0});
  perfect.Set(after_r, {0, 1});
  CHECK(Exploitability(*lx, perfect, kPlayer1) == 0.0);
  const auto good = Play(*lx, FixedPlayer(perfect), idle, 3, 2);
  CHECK(AuditGlobal(good, *lx, kPlayer1).epsilon == 0.0);
}

TEST_CASE("stateless algorithms: global equals strong global") {
  Rng rng(12);
  for (const std::string name : {"cmp", "kuhn"}) {
    auto game = MakeGame(name);
    const GameTree tree = GameTree::Build(*game);
    for (Player seat : {kPlayer1, kPlayer2}) {
      for (int trial = 0; trial < 3; ++trial) {
        FixedPlayer alg(tree.FromTabular(seat, testing_util::RandomPolicy(tree, seat, rng)));
        FixedPlayer opp(tree.FromTabular(Opponent(seat), tree.UniformPolicy(Opponent(seat))));
        const auto records = seat == kPlayer1 ? Play(*game, alg, opp, 60, 2, trial)
                                              : Play(*game, opp, alg, 60, 2, trial);
        std::set<std::string> seen;
        for (const auto& r : records) {
          for (const auto& m : r.matches) {
            for (const auto& q : m.queries) {
              if (q.player == seat) seen.insert(q.infoset);
            }
          }
        }
        REQUIRE(static_cast<int>(seen.size()) == tree.num_infosets(seat));
        const double global = AuditGlobal(records, *game, seat).epsilon;
        const double strong = AuditStrongGlobal(alg, *game, seat, {}).epsilon;
        CHECK(std::abs(global - strong) <= 1e-6);
      }
    }
  }
}

TEST_CASE("hierarchy ordering on logged records") {
  std::shared_ptr<const Game> cmp = MakeCoordinatedMatchingPennies();
  FixedPlayer u1(CmpPlayer1Strategy(0.5));
  OosOptions oos_options;
  oos_options.solver.iterations = 2000;
  OosPlayer oos(cmp, oos_options);
  PlayCache cache;
  RoundRobinPlayer rr;
  FixedPlayer composed(CmpStrategy(1.0, 0.5));
  FixedPlayer eq(CmpStrategy(0.2, 0.8));
  for (const OnlineAlgorithm* alg :
       std::vector<const OnlineAlgorithm*>{&oos, &cache, &rr, &composed, &eq}) {
    AuditRequest request;
    request.player = kPlayer2;
    request.level = ConsistencyLevel::kStrongGlobal;
    request.alg = alg;
    const auto records = Play(*cmp, u1, *alg, 4, 3);
    const ConsistencyAudit a = Audit(records, *cmp, request);
    CAPTURE(alg->Name());
    CHECK(a.epsilon_local <= a.epsilon_global);
    CHECK(a.epsilon_global <= a.epsilon_strong + 1e-3);
  }
  AuditRequest cache_request;
  cache_request.player = kPlayer2;
  cache_request.level = ConsistencyLevel::kStrongGlobal;
  cache_request.alg = &cache;
  const ConsistencyAudit a = Audit(Play(*cmp, u1, cache, 10, 3), *cmp, cache_request);
  CHECK(a.level_achieved == ConsistencyLevel::kGlobal);
  CHECK(LevelName(a.level_achieved) == "global");
  AuditRequest missing = cache_request;
  missing.alg = nullptr;
  CHECK_THROWS_AS(Audit(Play(*cmp, u1, cache, 1, 1), *cmp, missing), UsageError);
}

}  // namespace
}  // namespace soundlab
