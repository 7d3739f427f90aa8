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

#ifndef SOUNDLAB_EQUILIBRIUM_H_
#define SOUNDLAB_EQUILIBRIUM_H_

#include <array>
#include <cstdint>

#include "soundlab/fosg.h"
#include "soundlab/game_tree.h"

namespace soundlab {

// Values within this distance of zero are reported as exactly zero.
inline constexpr double kExploitabilityTolerance = 1e-9;

struct BestResponseResult {
  BehavioralStrategy strategy;  // Pure; ties go to the lowest action index.
  double value = 0.0;           // Responder's expected utility.
};

struct GameValueCertificate {
  double value = 0.0;  // Player 1 game value.
  StrategyProfile profile;
  // Largest exploitability of either profile strategy relative to `value`.
  double residual = 0.0;
  // Guaranteed interval for the value: [-brv2(sigma1), brv1(sigma2)].
  double lower = 0.0;
  double upper = 0.0;
  int64_t iterations = 0;
};

// Pure best response computed bottom-up over the responder's infosets.
// Decision nodes of the other player follow `opponent`; the tree may also
// contain no such nodes at all (response games).
struct TreeBestResponse {
  TabularPolicy policy;
  double value = 0.0;
};
TreeBestResponse BestResponseOnTree(const GameTree& tree, Player responder,
                                    const TabularPolicy& opponent);

BestResponseResult BestResponse(const Game& game,
                                const BehavioralStrategy& opponent,
                                Player player);

// Vanilla CFR until the residual drops to `tolerance`. A game's closed-form
// value is adopted only when it lies in the certified interval. Throws
// NonConvergenceError after `max_iterations`.
GameValueCertificate GameValue(const Game& game, double tolerance = 1e-3,
                               int64_t max_iterations = 20'000'000);

// GameValue memoized per game name.
const GameValueCertificate& CachedGameValue(const Game& game);

// u_p(sigma*) minus the worst case of `strategy` for `player`.
double Exploitability(const Game& game, const BehavioralStrategy& strategy,
                      Player player);
double Exploitability(const GameTree& tree, double game_value,
                      const TabularPolicy& policy, Player player);

// brv1(sigma2) + brv2(sigma1).
double NashConv(const Game& game, const StrategyProfile& profile);

bool IsEpsilonEquilibriumMember(const Game& game,
                                const BehavioralStrategy& strategy,
                                Player player, double epsilon,
                                double tolerance = kExploitabilityTolerance);

}  // namespace soundlab

#endif  // SOUNDLAB_EQUILIBRIUM_H_
