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

#include "soundlab/games.h"

#include <array>

#include "soundlab/error.h"

namespace soundlab {

WorldId TabularGame::AddWorld(int n1, int n2, std::vector<std::string> names1,
                              std::vector<std::string> names2) {
  WorldData data;
  data.num_actions = {n1, n2};
  data.action_names = {std::move(names1), std::move(names2)};
  data.entries.resize(static_cast<size_t>(n1) * n2);
  worlds_.push_back(std::move(data));
  return static_cast<WorldId>(worlds_.size()) - 1;
}

void TabularGame::SetTransition(WorldId world, const JointAction& action,
                                double reward1,
                                std::vector<Successor> successors) {
  WorldData& data = worlds_.at(world);
  Entry& entry = data.entries.at(action[0] * data.num_actions[1] + action[1]);
  entry.reward1 = reward1;
  entry.successors = std::move(successors);
}

const TabularGame::Entry& TabularGame::EntryAt(WorldId world,
                                               const JointAction& action) const {
  const WorldData& data = worlds_.at(world);
  if (action[0] < 0 || action[0] >= data.num_actions[0] || action[1] < 0 ||
      action[1] >= data.num_actions[1]) {
    throw SoundlabError("illegal joint action at world " +
                        std::to_string(world));
  }
  return data.entries[action[0] * data.num_actions[1] + action[1]];
}

std::vector<Outcome> TabularGame::Transition(WorldId world,
                                             const JointAction& action) const {
  std::vector<Outcome> out;
  for (const Successor& s : EntryAt(world, action).successors) {
    out.push_back({s.next, s.probability});
  }
  return out;
}

double TabularGame::Reward(WorldId world, const JointAction& action,
                           Player player) const {
  const double r1 = EntryAt(world, action).reward1;
  return player == kPlayer1 ? r1 : -r1;
}

Observation TabularGame::Observe(WorldId prev, const JointAction& action,
                                 WorldId next) const {
  for (const Successor& s : EntryAt(prev, action).successors) {
    if (s.next == next) return s.observation;
  }
  throw SoundlabError("world " + std::to_string(next) +
                      " is not a successor of world " + std::to_string(prev));
}

std::string TabularGame::ActionName(WorldId world, Player player,
                                    ActionId action) const {
  const auto& names = worlds_.at(world).action_names[player];
  if (action >= 0 && action < static_cast<int>(names.size())) {
    return names[action];
  }
  return Game::ActionName(world, player, action);
}

namespace {

// Key of the infostate reached through `history`.
std::string KeyAt(const Game& game, const History& history, Player player) {
  return InfoStateOf(game, history, player).key();
}

Observation PublicObs(std::string pub) {
  Observation obs;
  obs.public_obs = std::move(pub);
  return obs;
}

}  // namespace

std::shared_ptr<const TabularGame> MakeCoordinatedMatchingPennies() {
  auto game = std::make_shared<TabularGame>("cmp");
  const std::vector<std::string> coin{"Heads", "Tails"};
  const WorldId root = game->AddWorld(2, 1, coin, {"-"});
  // Worlds where player 2 acts, indexed [p1 action][side].
  std::array<std::array<WorldId, 2>, 2> second{};
  for (ActionId a1 = 0; a1 < 2; ++a1) {
    for (int side = 0; side < 2; ++side) {
      second[a1][side] = game->AddWorld(1, 2, {"-"}, coin);
    }
  }
  for (ActionId a1 = 0; a1 < 2; ++a1) {
    game->SetTransition(root, {a1, 0}, 0.0,
                        {{second[a1][0], 0.5, PublicObs("L")},
                         {second[a1][1], 0.5, PublicObs("R")}});
    for (int side = 0; side < 2; ++side) {
      for (ActionId a2 = 0; a2 < 2; ++a2) {
        const WorldId end = game->AddWorld(0, 0);
        game->SetTransition(second[a1][side], {0, a2}, a1 == a2 ? 1.0 : -1.0,
                            {{end, 1.0, {}}});
      }
    }
  }
  game->SetKnownValue(0.0);

  History h(root);
  game->NameInfoState("p1", kPlayer1, KeyAt(*game, h, kPlayer1));
  h.Append({kHeads, 0}, second[kHeads][0]);
  game->NameInfoState("s1", kPlayer2, KeyAt(*game, h, kPlayer2));
  History h2(root);
  h2.Append({kHeads, 0}, second[kHeads][1]);
  game->NameInfoState("s2", kPlayer2, KeyAt(*game, h2, kPlayer2));
  return game;
}

std::shared_ptr<const TabularGame> MakeKuhnPoker() {
  auto game = std::make_shared<TabularGame>("kuhn");
  const std::array<std::string, 3> cards{"J", "Q", "K"};
  const std::vector<std::string> acts{"Pass", "Bet"};
  const WorldId root = game->AddWorld(1, 1, {"-"}, {"-"});

  struct Deal {
    int c1, c2;
    WorldId first, after_p, after_pb, after_b;
  };
  std::vector<Deal> deals;
  std::vector<TabularGame::Successor> dealing;
  auto terminal = [&](const std::string& pub) {
    return TabularGame::Successor{game->AddWorld(0, 0), 1.0, PublicObs(pub)};
  };
  for (int c1 = 0; c1 < 3; ++c1) {
    for (int c2 = 0; c2 < 3; ++c2) {
      if (c1 == c2) continue;
      Deal d{c1, c2, game->AddWorld(2, 1, acts, {"-"}),
             game->AddWorld(1, 2, {"-"}, acts),
             game->AddWorld(2, 1, acts, {"-"}),
             game->AddWorld(1, 2, {"-"}, acts)};
      Observation deal_obs;
      deal_obs.private_obs = {cards[c1], cards[c2]};
      dealing.push_back({d.first, 1.0 / 6.0, deal_obs});

      const double showdown = c1 > c2 ? 1.0 : -1.0;
      game->SetTransition(d.first, {0, 0}, 0.0,
                          {{d.after_p, 1.0, PublicObs("p")}});
      game->SetTransition(d.first, {1, 0}, 0.0,
                          {{d.after_b, 1.0, PublicObs("b")}});
      game->SetTransition(d.after_p, {0, 0}, showdown, {terminal("p")});
      game->SetTransition(d.after_p, {0, 1}, 0.0,
                          {{d.after_pb, 1.0, PublicObs("b")}});
      game->SetTransition(d.after_pb, {0, 0}, -1.0, {terminal("p")});
      game->SetTransition(d.after_pb, {1, 0}, 2.0 * showdown,
                          {terminal("b")});
      game->SetTransition(d.after_b, {0, 0}, 1.0, {terminal("p")});
      game->SetTransition(d.after_b, {0, 1}, 2.0 * showdown,
                          {terminal("b")});
      deals.push_back(d);
    }
  }
  game->SetTransition(root, {0, 0}, 0.0, std::move(dealing));
  game->SetKnownValue(-1.0 / 18.0);

  // Name infostates through one representative deal per card.
  for (const Deal& d : deals) {
    History h(root);
    h.Append({0, 0}, d.first);
    History hp = h;
    hp.Append({0, 0}, d.after_p);
    History hpb = hp;
    hpb.Append({0, 1}, d.after_pb);
    History hb = h;
    hb.Append({1, 0}, d.after_b);
    game->NameInfoState(cards[d.c1], kPlayer1, KeyAt(*game, h, kPlayer1));
    game->NameInfoState(cards[d.c1] + "pb", kPlayer1,
                        KeyAt(*game, hpb, kPlayer1));
    game->NameInfoState(cards[d.c2] + "p", kPlayer2,
                        KeyAt(*game, hp, kPlayer2));
    game->NameInfoState(cards[d.c2] + "b", kPlayer2,
                        KeyAt(*game, hb, kPlayer2));
  }
  return game;
}

std::shared_ptr<const TabularGame> MakeMatchingPennies() {
  auto game = std::make_shared<TabularGame>("mp");
  const std::vector<std::string> coin{"Heads", "Tails"};
  const WorldId root = game->AddWorld(2, 2, coin, coin);
  for (ActionId a1 = 0; a1 < 2; ++a1) {
    for (ActionId a2 = 0; a2 < 2; ++a2) {
      game->SetTransition(root, {a1, a2}, a1 == a2 ? 1.0 : -1.0,
                          {{game->AddWorld(0, 0), 1.0, {}}});
    }
  }
  game->SetKnownValue(0.0);
  const History h(root);
  game->NameInfoState("p1", kPlayer1, KeyAt(*game, h, kPlayer1));
  game->NameInfoState("p2", kPlayer2, KeyAt(*game, h, kPlayer2));
  return game;
}

std::shared_ptr<const TabularGame> MakeZeroPayoffNfg3x3() {
  auto game = std::make_shared<TabularGame>("nfg3x3");
  const std::vector<std::string> abc{"A", "B", "C"};
  const WorldId root = game->AddWorld(3, 3, abc, abc);
  for (ActionId a1 = 0; a1 < 3; ++a1) {
    for (ActionId a2 = 0; a2 < 3; ++a2) {
      game->SetTransition(root, {a1, a2}, 0.0,
                          {{game->AddWorld(0, 0), 1.0, {}}});
    }
  }
  game->SetKnownValue(0.0);
  const History h(root);
  game->NameInfoState("p1", kPlayer1, KeyAt(*game, h, kPlayer1));
  game->NameInfoState("p2", kPlayer2, KeyAt(*game, h, kPlayer2));
  return game;
}

std::shared_ptr<const TabularGame> MakePerfectInfoLxGame() {
  auto game = std::make_shared<TabularGame>("lx");
  const WorldId root = game->AddWorld(2, 1, {"L", "R"}, {"-"});
  const WorldId after_l = game->AddWorld(2, 1, {"Y", "X"}, {"-"});
  const WorldId after_r = game->AddWorld(2, 1, {"Y", "X"}, {"-"});
  game->SetTransition(root, {0, 0}, 0.0, {{after_l, 1.0, PublicObs("L")}});
  game->SetTransition(root, {1, 0}, 0.0, {{after_r, 1.0, PublicObs("R")}});
  game->SetTransition(after_l, {0, 0}, 1.0, {{game->AddWorld(0, 0), 1.0, {}}});
  game->SetTransition(after_l, {1, 0}, 0.0, {{game->AddWorld(0, 0), 1.0, {}}});
  game->SetTransition(after_r, {0, 0}, 0.0, {{game->AddWorld(0, 0), 1.0, {}}});
  game->SetTransition(after_r, {1, 0}, 1.0, {{game->AddWorld(0, 0), 1.0, {}}});
  game->SetKnownValue(1.0);
  History h(root);
  game->NameInfoState("top", kPlayer1, KeyAt(*game, h, kPlayer1));
  History hl = h;
  hl.Append({0, 0}, after_l);
  game->NameInfoState("afterL", kPlayer1, KeyAt(*game, hl, kPlayer1));
  History hr = h;
  hr.Append({1, 0}, after_r);
  game->NameInfoState("afterR", kPlayer1, KeyAt(*game, hr, kPlayer1));
  return game;
}

std::vector<std::string> GameNames() {
  return {"cmp", "kuhn", "mp", "nfg3x3", "lx"};
}

std::shared_ptr<const Game> MakeGame(const std::string& name) {
  if (name == "cmp") return MakeCoordinatedMatchingPennies();
  if (name == "kuhn") return MakeKuhnPoker();
  if (name == "mp") return MakeMatchingPennies();
  if (name == "nfg3x3") return MakeZeroPayoffNfg3x3();
  if (name == "lx") return MakePerfectInfoLxGame();
  throw UsageError("unknown game '" + name +
                   "' (expected cmp, kuhn, mp, nfg3x3 or lx)");
}

std::string ResolveInfoStateKey(const Game& game,
                                const std::string& name_or_key) {
  const auto names = game.InfoStateNames();
  auto it = names.find(name_or_key);
  return it == names.end() ? name_or_key : it->second.second;
}

namespace {

void CheckUnit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw RangeError(std::string(what) + " must lie in [0, 1]");
  }
}

const TabularGame& CmpInstance() {
  static const auto game = MakeCoordinatedMatchingPennies();
  return *game;
}

const TabularGame& KuhnInstance() {
  static const auto game = MakeKuhnPoker();
  return *game;
}

}  // namespace

BehavioralStrategy CmpStrategy(double p, double q) {
  CheckUnit(p, "p");
  CheckUnit(q, "q");
  BehavioralStrategy s;
  s.Set(ResolveInfoStateKey(CmpInstance(), "s1"), {p, 1.0 - p});
  s.Set(ResolveInfoStateKey(CmpInstance(), "s2"), {q, 1.0 - q});
  return s;
}

BehavioralStrategy CmpPlayer1Strategy(double h) {
  CheckUnit(h, "heads probability");
  BehavioralStrategy s;
  s.Set(ResolveInfoStateKey(CmpInstance(), "p1"), {h, 1.0 - h});
  return s;
}

BehavioralStrategy KuhnAlphaEquilibrium(double alpha) {
  CheckUnit(alpha, "alpha");
  const double bluff = alpha / 3.0;
  const double call_q = bluff + 1.0 / 3.0;
  const TabularGame& kuhn = KuhnInstance();
  BehavioralStrategy s;
  s.Set(ResolveInfoStateKey(kuhn, "J"), {1.0 - bluff, bluff});
  s.Set(ResolveInfoStateKey(kuhn, "Jpb"), {1.0, 0.0});
  s.Set(ResolveInfoStateKey(kuhn, "Q"), {1.0, 0.0});
  s.Set(ResolveInfoStateKey(kuhn, "Qpb"), {1.0 - call_q, call_q});
  s.Set(ResolveInfoStateKey(kuhn, "K"), {1.0 - alpha, alpha});
  s.Set(ResolveInfoStateKey(kuhn, "Kpb"), {0.0, 1.0});
  return s;
}

BehavioralStrategy KuhnPlayer2Equilibrium() {
  const TabularGame& kuhn = KuhnInstance();
  BehavioralStrategy s;
  s.Set(ResolveInfoStateKey(kuhn, "Jp"), {2.0 / 3.0, 1.0 / 3.0});
  s.Set(ResolveInfoStateKey(kuhn, "Jb"), {1.0, 0.0});
  s.Set(ResolveInfoStateKey(kuhn, "Qp"), {1.0, 0.0});
  s.Set(ResolveInfoStateKey(kuhn, "Qb"), {2.0 / 3.0, 1.0 / 3.0});
  s.Set(ResolveInfoStateKey(kuhn, "Kp"), {0.0, 1.0});
  s.Set(ResolveInfoStateKey(kuhn, "Kb"), {0.0, 1.0});
  return s;
}

std::optional<AlphaFamily> AlphaFamilyFor(const std::string& game_name) {
  if (game_name == "cmp") {
    return AlphaFamily{kPlayer2,
                       [](double a) { return CmpStrategy(a, 1.0 - a); }};
  }
  if (game_name == "kuhn") {
    return AlphaFamily{kPlayer1, KuhnAlphaEquilibrium};
  }
  return std::nullopt;
}

}  // namespace soundlab
