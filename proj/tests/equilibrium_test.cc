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

#include <cmath>

#include "oracles/brute_force.h"
#include "oracles/kuhn_sequence_form.h"
#include "soundlab/equilibrium.h"
#include "soundlab/error.h"
#include "soundlab/games.h"
#include "test_util.h"

namespace soundlab {
namespace {

TEST_CASE("best response on CMP") {
  auto cmp = MakeCoordinatedMatchingPennies();
  const std::string p1 = ResolveInfoStateKey(*cmp, "p1");
  CHECK(BestResponse(*cmp, CmpStrategy(1.0, 0.0), kPlayer1).value ==
        doctest::Approx(0.0));
  const BestResponseResult heads = BestResponse(*cmp, CmpStrategy(1.0, 1.0), kPlayer1);
  CHECK(heads.value == doctest::Approx(1.0));
  CHECK(heads.strategy.At(p1) == std::vector<double>{1.0, 0.0});
  CHECK(BestResponse(*cmp, CmpStrategy(0.5, 0.5), kPlayer1).value ==
        doctest::Approx(0.0));
  CHECK_THROWS_AS(BestResponse(*cmp, BehavioralStrategy{}, kPlayer1),
                  MissingStrategyError);
}

TEST_CASE("best response matches pure-strategy enumeration") {
  Rng rng(11);
  for (const std::string& name : GameNames()) {
    auto game = MakeGame(name);
    const GameTree tree = GameTree::Build(*game);
    for (int trial = 0; trial < 20; ++trial) {
      for (Player p : {kPlayer1, kPlayer2}) {
        const TabularPolicy opp = testing_util::RandomPolicy(tree, Opponent(p), rng);
        const double exact = BestResponseOnTree(tree, p, opp).value;
        CHECK(std::abs(exact - oracles::BruteForceBestResponse(tree, p, opp)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("CMP exploitability equals |p+q-1| on a grid") {
  auto cmp = MakeCoordinatedMatchingPennies();
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; j <= 20; ++j) {
      const double p = i / 20.0, q = j / 20.0;
      CHECK(std::abs(Exploitability(*cmp, CmpStrategy(p, q), kPlayer2) -
                     oracles::CmpExploitability(p, q)) <= 1e-9);
    }
  }
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const double p = rng.Uniform(), q = rng.Uniform();
    CHECK(std::abs(Exploitability(*cmp, CmpStrategy(p, q), kPlayer2) -
                   oracles::CmpExploitability(p, q)) <= 1e-9);
  }
  CHECK(Exploitability(*cmp, CmpStrategy(1.0, 0.5), kPlayer2) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(Exploitability(*cmp, CmpStrategy(0.5, 0.5), kPlayer2) == 0.0);
}

TEST_CASE("game values") {
  const GameValueCertificate cmp = GameValue(*MakeCoordinatedMatchingPennies());
  CHECK(std::abs(cmp.value) <= 1e-6);
  CHECK(GameValue(*MakeZeroPayoffNfg3x3()).value == 0.0);
  CHECK(GameValue(*MakeMatchingPennies()).value == doctest::Approx(0.0));
  CHECK(GameValue(*MakePerfectInfoLxGame()).value == doctest::Approx(1.0));

  const GameValueCertificate& kuhn = CachedGameValue(*MakeKuhnPoker());
  CHECK(kuhn.residual <= 1e-3);
  CHECK(kuhn.lower <= kuhn.value);
  CHECK(kuhn.value <= kuhn.upper);
  CHECK(std::abs(kuhn.value - (-1.0 / 18.0)) <= 1e-3);
  const double oracle = oracles::KuhnValue();
  CHECK(oracle == doctest::Approx(-1.0 / 18.0).epsilon(1e-9));
  CHECK(std::abs(kuhn.value - oracle) <= 1e-3);
  CHECK_THROWS_AS(GameValue(*MakeKuhnPoker(), 1e-9, 100), NonConvergenceError);
}

TEST_CASE("epsilon-equilibrium membership") {
  auto cmp = MakeCoordinatedMatchingPennies();
  CHECK(IsEpsilonEquilibriumMember(*cmp, CmpStrategy(0.3, 0.7), kPlayer2, 0.0));
  CHECK_FALSE(IsEpsilonEquilibriumMember(*cmp, CmpStrategy(1.0, 0.5), kPlayer2, 0.4));
  Rng rng(5);
  const GameTree tree = GameTree::Build(*cmp);
  for (int i = 0; i < 20; ++i) {
    const BehavioralStrategy s =
        tree.FromTabular(kPlayer2, testing_util::RandomPolicy(tree, kPlayer2, rng));
    CHECK(IsEpsilonEquilibriumMember(*cmp, s, kPlayer2, tree.utility_range()));
  }
}

TEST_CASE("NashConv") {
  auto cmp = MakeCoordinatedMatchingPennies();
  CHECK(NashConv(*cmp, {CmpPlayer1Strategy(0.5), CmpStrategy(0.5, 0.5)}) ==
        doctest::Approx(0.0));
  // Against (1, 0.5) player 1 wins 0.5 by Heads; against always-Heads
  // player 2 wins 1 by Tails.
  CHECK(NashConv(*cmp, {CmpPlayer1Strategy(1.0), CmpStrategy(1.0, 0.5)}) ==
        doctest::Approx(1.5));
}

}  // namespace
}  // namespace soundlab
