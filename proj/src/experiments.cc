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


#include "soundlab/experiments.h"


#include "soundlab/equilibrium.h"
#include "soundlab/error.h"
#include "soundlab/game_tree.h"
#include "soundlab/games.h"
#include "soundlab/parallel.h"
#include "soundlab/rng.h"
#include "soundlab/strategy_io.h"

namespace soundlab {

void ExperimentConfig::Validate() const {
  solver.Validate();
  if (seeds < 1) throw RangeError("seed count must be at least 1");
  if (jobs < 1) throw RangeError("jobs must be at least 1");
  for (size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 0 || checkpoints[i] > solver.iterations ||
        (i > 0 && checkpoints[i] <= checkpoints[i - 1])) {
      throw RangeError(
          "checkpoints must be strictly increasing within [0, iterations]");
    }
  }
  if (targets.empty()) throw RangeError("at least one bias target is required");
}

std::vector<int64_t> ExperimentConfig::EffectiveCheckpoints() const {
  if (!checkpoints.empty()) return checkpoints;
  if (solver.iterations == 0) return {0};
  return solver.EffectiveCheckpoints();
}

ExperimentConfig DefaultOosConfig(const std::string& game) {
  ExperimentConfig config;
  config.game = game;
  config.solver.iterations = 1000000;
  return config;
}

namespace {

struct Curve {
  std::string name;
  Player player;
  // One policy per checkpoint per seed.
  std::vector<std::vector<TabularPolicy>> policies;
};

// Average strategies of one run at the requested checkpoints.
std::vector<TabularPolicy> RunOne(std::shared_ptr<const GameTree> tree,
                                  const Game& game, SolverConfig solver,
                                  Player player, std::optional<double> alpha,
                                  const std::vector<int64_t>& checkpoints) {
  RegretTable table(tree);
  if (alpha) {
    const auto family = AlphaFamilyFor(game.Name());
    if (!family) throw UsageError("no equilibrium family to kickstart " + game.Name());
    table = KickstartRegrets(std::move(table), family->player,
                             family->strategy(*alpha), solver.kickstart_mu);
  }
  solver.checkpoints.clear();
  for (int64_t c : checkpoints) {
    if (c > 0) solver.checkpoints.push_back(c);
  }
  std::vector<TabularPolicy> out;
  if (!checkpoints.empty() && checkpoints.front() == 0) {
    out.push_back(tree->UniformPolicy(player));
  }
  if (solver.checkpoints.empty()) return out;
  solver.iterations = solver.checkpoints.back();
  MccfrResult result = RunMccfr(solver, std::move(table));
  for (const MccfrSnapshot& s : result.snapshots) out.push_back(s.average[player]);
  return out;
}

// Behavioral form of the mixture of `policies`, weighting each infostate's
// answers by the player's own reach.
TabularPolicy Mixture(const GameTree& tree, Player p,
                      const std::vector<const TabularPolicy*>& policies) {
  const int n = tree.num_infosets(p);
  TabularPolicy weighted(n), plain(n);
  std::vector<double> total(n, 0.0);
  for (int i = 0; i < n; ++i) {
    weighted[i].assign(tree.infoset(p, i).num_actions, 0.0);
    plain[i] = weighted[i];
  }
  for (const TabularPolicy* policy : policies) {
    const std::vector<double> reach = tree.OwnReach(p, *policy);
    for (int i = 0; i < n; ++i) {
      total[i] += reach[i];
      for (size_t a = 0; a < weighted[i].size(); ++a) {
        weighted[i][a] += reach[i] * (*policy)[i][a];
        plain[i][a] += (*policy)[i][a];
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    if (total[i] > 0.0) {
      for (double& x : weighted[i]) x /= total[i];
    } else {
      weighted[i] = plain[i];
      for (double& x : weighted[i]) x /= static_cast<double>(policies.size());
    }
  }
  return weighted;
}

}  // namespace

std::string ExperimentReport::ToCsv() const {
  std::string out = "iteration,seed,curve,exploitability\n";
  for (const ExperimentRow& row : rows) {
    out += std::to_string(row.iteration) + "," +
           (row.seed < 0 ? std::string("mean") : std::to_string(row.seed)) +
           "," + row.curve + "," + FormatDouble(row.exploitability) + "\n";
  }
  return out;
}

double ExperimentReport::Mean(const std::string& curve, int64_t iteration) const {
  for (const ExperimentRow& row : rows) {
    if (row.seed < 0 && row.curve == curve && row.iteration == iteration) {
      return row.exploitability;
    }
  }
  throw RangeError("no " + curve + " row at iteration " +
                   std::to_string(iteration));
}

ExperimentReport RunExperiment(const Game& game, const ExperimentConfig& config) {
  config.Validate();
  auto tree = std::make_shared<const GameTree>(GameTree::Build(game));
  const std::vector<int64_t> checkpoints = config.EffectiveCheckpoints();

  // Resolve targets; they must share one player.
  std::vector<std::string> keys;
  Player player = kPlayer1;
  std::vector<int> target_infoset;
  for (size_t t = 0; t < config.targets.size(); ++t) {
    keys.push_back(ResolveInfoStateKey(game, config.targets[t].infostate));
    std::optional<int> found;
    for (Player p : {kPlayer1, kPlayer2}) {
      if (auto i = tree->FindInfoset(p, keys.back())) {
        if (t > 0 && p != player) {
          throw RangeError("bias targets belong to different players");
        }
        player = p;
        found = i;
      }
    }
    if (!found) {
      throw RangeError("not an acting infostate: " + config.targets[t].infostate);
    }
    target_infoset.push_back(*found);
  }
  // Run answering each infostate in the tabularized strategy.
  const int n = tree->num_infosets(player);
  std::vector<int> source(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j >= 0; j = tree->infoset(player, j).parent_infoset) {
      bool hit = false;
      for (size_t t = 0; t < target_infoset.size(); ++t) {
        if (target_infoset[t] == j) {
          source[i] = static_cast<int>(t);
          hit = true;
          break;
        }
      }
      if (hit) break;
    }
  }

  // runs[seed][r][checkpoint]; r indexes targets, then the unbiased run.
  const int num_runs = static_cast<int>(keys.size()) + 1;
  std::vector<std::vector<std::vector<TabularPolicy>>> runs(
      config.seeds, std::vector<std::vector<TabularPolicy>>(num_runs));
  ParallelFor(static_cast<int64_t>(config.seeds) * num_runs, config.jobs,
              [&](int64_t job) {
                const int seed = static_cast<int>(job / num_runs);
                const int r = static_cast<int>(job % num_runs);
                SolverConfig solver = config.solver;
                solver.seed = DeriveSeed(DeriveSeed(config.master_seed, seed), r);
                std::optional<double> alpha;
                solver.bias_targets.clear();
                if (r < num_runs - 1) {
                  solver.bias_targets = {keys[r]};
                  alpha = config.targets[r].alpha;
                }
                runs[seed][r] =
                    RunOne(tree, game, solver, player, alpha, checkpoints);
              });

  const double value = CachedGameValue(game).value;
  std::vector<std::string> names;
  for (const BiasTarget& t : config.targets) names.push_back("biased:" + t.infostate);
  names.push_back("tabularized");
  names.push_back("unbiased");

  ExperimentReport report;
  for (size_t c = 0; c < checkpoints.size(); ++c) {
    // per_curve[curve][seed]
    std::vector<std::vector<TabularPolicy>> per_curve(names.size());
    for (int seed = 0; seed < config.seeds; ++seed) {
      const auto& r = runs[seed];
      for (size_t t = 0; t < keys.size(); ++t) per_curve[t].push_back(r[t][c]);
      TabularPolicy combined(n);
      for (int i = 0; i < n; ++i) combined[i] = r[source[i]][c][i];
      per_curve[keys.size()].push_back(std::move(combined));
      per_curve[keys.size() + 1].push_back(r[num_runs - 1][c]);
    }
    for (int seed = 0; seed < config.seeds; ++seed) {
      for (size_t k = 0; k < names.size(); ++k) {
        report.rows.push_back(
            {checkpoints[c], seed, names[k],
             Exploitability(*tree, value, per_curve[k][seed], player)});
      }
    }
    for (size_t k = 0; k < names.size(); ++k) {
      std::vector<const TabularPolicy*> all;
      for (const TabularPolicy& p : per_curve[k]) all.push_back(&p);
      report.rows.push_back({checkpoints[c], -1, names[k],
                             Exploitability(*tree, value,
                                            Mixture(*tree, player, all), player)});
    }
  }
  return report;
}

ExperimentReport ExperimentOosCmp(ExperimentConfig config) {
  config.game = "cmp";
  if (config.targets.empty()) config.targets = {{"s1", 0.5}, {"s2", 1.0}};
  return RunExperiment(*MakeGame("cmp"), config);
}

ExperimentReport ExperimentOosKuhn(ExperimentConfig config) {
  config.game = "kuhn";
  if (config.targets.empty()) {
    config.targets = {{"J", 0.0}, {"Q", 0.5}, {"K", 1.0}};
  }
  return RunExperiment(*MakeGame("kuhn"), config);
}

}  // namespace soundlab
