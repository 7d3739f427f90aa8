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


#include "soundlab/cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "soundlab/arena.h"
#include "soundlab/consistency.h"
#include "soundlab/equilibrium.h"
#include "soundlab/error.h"
#include "soundlab/experiments.h"
#include "soundlab/games.h"
#include "soundlab/online.h"
#include "soundlab/solvers.h"
#include "soundlab/strategy_io.h"

namespace soundlab {
namespace {

constexpr char kUsage[] =
    "usage: soundlab <subcommand> [options]\n"
    "subcommands: solve exploit arena response-game tabularize audit "
    "experiment\n"
    "run `soundlab <subcommand> --help` for options\n";

Player SeatOf(int seat) { return seat == 1 ? kPlayer1 : kPlayer2; }

// Parses "<infostate>@<value>", splitting at the last '@'.
std::pair<std::string, std::optional<double>> SplitAt(const std::string& text) {
  const size_t at = text.rfind('@');
  if (at == std::string::npos) return {text, std::nullopt};
  try {
    size_t used = 0;
    const double x = std::stod(text.substr(at + 1), &used);
    if (used == text.size() - at - 1) return {text.substr(0, at), x};
  } catch (const std::exception&) {
  }
  throw UsageError("expected <infostate>@<number>, got " + text);
}

struct SolverFlags {
  int64_t iters = 10000;
  uint64_t seed = 0;
  double exploration = 0.6;
  double bias = 0.1;
  std::string bias_meaning = "targeted";
  double mu = 500.0;

  void Add(CLI::App& app) {
    app.add_option("--iters", iters, "iterations")->capture_default_str();
    app.add_option("--seed", seed, "master seed")->capture_default_str();
    app.add_option("--exploration", exploration)->capture_default_str();
    app.add_option("--bias", bias, "bias probability")->capture_default_str();
    app.add_option("--bias-meaning", bias_meaning,
                   "whether --bias is the targeted or the untargeted share")
        ->check(CLI::IsMember({"targeted", "untargeted"}))
        ->capture_default_str();
    app.add_option("--mu", mu, "kickstart scale")->capture_default_str();
  }

  SolverConfig Config() const {
    SolverConfig c;
    c.iterations = iters;
    c.seed = seed;
    c.exploration = exploration;
    c.bias_probability = bias;
    c.bias_meaning = bias_meaning == "targeted" ? BiasMeaning::kTargeted
                                                : BiasMeaning::kUntargeted;
    c.kickstart_mu = mu;
    return c;
  }
};

// Everything an algorithm name needs to be instantiated.
struct AlgorithmFlags {
  SolverFlags solver;
  int64_t oos_iters = 1000;
  std::vector<std::string> kickstart;

  void Add(CLI::App& app) {
    solver.Add(app);
    app.add_option("--oos-iters", oos_iters, "oos: MCCFR iterations per move")
        ->capture_default_str();
    app.add_option("--kickstart", kickstart,
                   "oos: <infostate>@<alpha>, repeatable");
  }
};

// Algorithms by name: uniform, first, fixed=<file>, playcache, roundrobin,
// oos. `br` needs an opponent and is built by the caller.
std::unique_ptr<OnlineAlgorithm> MakeAlgorithm(
    const std::string& spec, Player seat, std::shared_ptr<const Game> game,
    const GameTree& tree, const AlgorithmFlags& flags) {
  if (spec == "uniform") {
    return std::make_unique<FixedPlayer>(
        tree.FromTabular(seat, tree.UniformPolicy(seat)), "uniform");
  }
  if (spec == "first") {
    TabularPolicy policy = tree.UniformPolicy(seat);
    for (auto& probs : policy) {
      std::fill(probs.begin(), probs.end(), 0.0);
      probs[0] = 1.0;
    }
    return std::make_unique<FixedPlayer>(tree.FromTabular(seat, policy), "first");
  }
  if (spec.rfind("fixed=", 0) == 0) {
    StrategyFile file = ReadStrategyFile(spec.substr(6), *game, tree);
    if (file.player != seat) {
      throw UsageError("strategy file " + spec.substr(6) + " is for player " +
                       std::to_string(file.player + 1));
    }
    return std::make_unique<FixedPlayer>(std::move(file.strategy));
  }
  if (spec == "playcache") return std::make_unique<PlayCache>();
  if (spec == "roundrobin") return std::make_unique<RoundRobinPlayer>();
  if (spec == "oos") {
    OosOptions options;
    options.solver = flags.solver.Config();
    options.solver.iterations = flags.oos_iters;
    for (const std::string& item : flags.kickstart) {
      auto [name, alpha] = SplitAt(item);
      if (!alpha) throw UsageError("--kickstart needs <infostate>@<alpha>");
      options.kickstart_alpha[ResolveInfoStateKey(*game, name)] = *alpha;
    }
    return std::make_unique<OosPlayer>(game, std::move(options));
  }
  throw UsageError("unknown algorithm '" + spec +
                   "' (uniform, first, fixed=<file>, playcache, roundrobin, "
                   "oos, br)");
}

std::vector<std::string> ResolveOrder(const Game& game, const std::string& list) {
  std::vector<std::string> order;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) order.push_back(ResolveInfoStateKey(game, item));
  return order;
}

using Runner = std::function<int()>;

Runner SetupSolve(CLI::App& app, std::ostream& out) {
  struct Flags {
    std::string game = "cmp";
    std::string algo = "cfr";
    SolverFlags solver;
    std::vector<std::string> targets;
    std::optional<double> alpha;
    int player = 0;
    std::string out_path, snapshots;
  };
  auto f = std::make_shared<Flags>();
  app.add_option("--game", f->game)->capture_default_str();
  app.add_option("--algo", f->algo)
      ->check(CLI::IsMember({"cfr", "mccfr"}))
      ->capture_default_str();
  f->solver.Add(app);
  app.add_option("--bias-target", f->targets, "mccfr: infostate, repeatable");
  app.add_option("--kickstart-alpha", f->alpha,
                 "mccfr: kickstart from the game's equilibrium family");
  app.add_option("--player", f->player,
                 "player whose strategy is written (default: owner of the "
                 "targets, else 1)")
      ->check(CLI::Range(1, 2));
  app.add_option("--out", f->out_path, "strategy file");
  app.add_option("--snapshots", f->snapshots,
                 "CSV iteration,seed,exploitability");
  return [f, &out] {
    auto game = MakeGame(f->game);
    auto tree = std::make_shared<const GameTree>(GameTree::Build(*game));
    const double value = CachedGameValue(*game).value;
    SolverConfig config = f->solver.Config();
    for (const std::string& t : f->targets) {
      config.bias_targets.push_back(ResolveInfoStateKey(*game, t));
    }
    Player player = kPlayer1;
    if (f->player) {
      player = SeatOf(f->player);
    } else if (!config.bias_targets.empty() &&
               !tree->FindInfoset(kPlayer1, config.bias_targets[0])) {
      player = kPlayer2;
    }
    config.Validate();
    std::array<TabularPolicy, kNumPlayers> final_policy;
    std::string csv = "iteration,seed,exploitability\n";
    auto record = [&](int64_t t, const TabularPolicy& policy) {
      csv += std::to_string(t) + "," + std::to_string(config.seed) + "," +
             FormatDouble(Exploitability(*tree, value, policy, player)) + "\n";
    };
    if (f->algo == "cfr") {
      if (!config.bias_targets.empty() || f->alpha) {
        throw UsageError("--bias-target and --kickstart-alpha need --algo mccfr");
      }
      CfrSolver solver(tree);
      for (int64_t c : config.EffectiveCheckpoints()) {
        solver.Iterate(c - solver.iterations());
        record(c, solver.AveragePolicy(player));
      }
      for (Player p : {kPlayer1, kPlayer2}) final_policy[p] = solver.AveragePolicy(p);
    } else {
      RegretTable table(tree);
      if (f->alpha) {
        const auto family = AlphaFamilyFor(game->Name());
        if (!family) throw UsageError("no equilibrium family for " + game->Name());
        table = KickstartRegrets(std::move(table), family->player,
                                 family->strategy(*f->alpha), config.kickstart_mu);
      }
      MccfrResult result = RunMccfr(config, std::move(table));
      for (const MccfrSnapshot& s : result.snapshots) {
        record(s.iteration, s.average[player]);
      }
      for (Player p : {kPlayer1, kPlayer2}) {
        final_policy[p] = result.table.AveragePolicy(p);
      }
    }
    for (Player p : {kPlayer1, kPlayer2}) {
      out << "exploitability_p" << p + 1 << "="
          << FormatDouble(Exploitability(*tree, value, final_policy[p], p)) << "\n";
    }
    if (!f->out_path.empty()) {
      WriteTextFile(f->out_path,
                    FormatStrategy(player, tree->FromTabular(player, final_policy[player])));
    }
    if (!f->snapshots.empty()) WriteTextFile(f->snapshots, csv);
    return 0;
  };
}

Runner SetupExploit(CLI::App& app, std::ostream& out) {
  struct Flags {
    std::string game = "cmp";
    std::string strategy;
  };
  auto f = std::make_shared<Flags>();
  app.add_option("--game", f->game)->capture_default_str();
  app.add_option("--strategy", f->strategy, "strategy file")->required();
  return [f, &out] {
    auto game = MakeGame(f->game);
    const GameTree tree = GameTree::Build(*game);
    const StrategyFile file = ReadStrategyFile(f->strategy, *game, tree);
    out << FormatDouble(Exploitability(tree, CachedGameValue(*game).value,
                                       tree.ToTabular(file.player, file.strategy),
                                       file.player))
        << "\n";
    return 0;
  };
}

Runner SetupArena(CLI::App& app, std::ostream& out) {
  struct Flags {
    std::string game = "cmp";
    std::string p1, p2;
    int k = 1;
    int seeds = 1;
    AlgorithmFlags algo;
    int jobs = 1;
    std::string out_path;
  };
  auto f = std::make_shared<Flags>();
  app.add_option("--game", f->game)->capture_default_str();
  app.add_option("--p1", f->p1, "player 1 algorithm")->required();
  app.add_option("--p2", f->p2, "player 2 algorithm")->required();
  app.add_option("--k", f->k, "matches per repeated game")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seeds", f->seeds, "repeated games")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  f->algo.Add(app);
  app.add_option("--jobs", f->jobs)->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--out", f->out_path,
                 "records CSV; queries go to <out>.queries.csv");
  return [f, &out] {
    std::shared_ptr<const Game> game = MakeGame(f->game);
    const GameTree tree = GameTree::Build(*game);
    const std::array<std::string, kNumPlayers> names{f->p1, f->p2};
    if (names[0] == "br" && names[1] == "br") {
      throw UsageError("at most one side can be br");
    }
    std::array<std::unique_ptr<OnlineAlgorithm>, kNumPlayers> algs;
    for (Player p : {kPlayer1, kPlayer2}) {
      if (names[p] != "br") algs[p] = MakeAlgorithm(names[p], p, game, tree, f->algo);
    }
    for (Player p : {kPlayer1, kPlayer2}) {
      if (names[p] != "br") continue;
      auto response = std::make_shared<ResponseGame>(game, *algs[Opponent(p)],
                                                     Opponent(p));
      algs[p] = std::make_unique<BestResponseAdversary>(response, f->k);
    }
    RunOptions options;
    options.jobs = f->jobs;
    options.record_theta = false;
    const auto records =
        RunRepeated(*game, {algs[0].get(), algs[1].get()}, f->k,
                    SeedRange(f->algo.solver.seed, f->seeds), options);
    double sum = 0.0, sq = 0.0;
    for (const auto& r : records) {
      const double x = r.AverageReward(kPlayer1);
      sum += x;
      sq += x * x;
    }
    const double n = static_cast<double>(records.size());
    const double mean = sum / n;
    const double var = n > 1 ? std::max(0.0, (sq - n * mean * mean) / (n - 1)) : 0.0;
    out << "mean_average_reward_p1=" << FormatDouble(mean) << "\n"
        << "standard_error=" << FormatDouble(std::sqrt(var / n)) << "\n";
    if (!f->out_path.empty()) WriteRecords(f->out_path, records);
    return 0;
  };
}

Runner SetupResponseGame(CLI::App& app, std::ostream& out) {
  struct Flags {
    std::string game = "cmp";
    std::string alg;
    int seat = 2;
    int kmax = 1;
    double epsilon = 0.0;
    int64_t budget = ResponseGame::kDefaultNodeBudget;
    AlgorithmFlags algo;
  };
  auto f = std::make_shared<Flags>();
  app.add_option("--game", f->game)->capture_default_str();
  app.add_option("--alg", f->alg, "online algorithm")->required();
  app.add_option("--seat", f->seat, "player the algorithm plays")
      ->check(CLI::Range(1, 2))
      ->capture_default_str();
  app.add_option("--kmax", f->kmax)->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--epsilon", f->epsilon)->capture_default_str();
  app.add_option("--budget", f->budget, "node budget")->capture_default_str();
  f->algo.Add(app);
  return [f, &out] {
    std::shared_ptr<const Game> game = MakeGame(f->game);
    const GameTree tree = GameTree::Build(*game);
    const Player seat = SeatOf(f->seat);
    auto alg = MakeAlgorithm(f->alg, seat, game, tree, f->algo);
    ResponseGame response(game, *alg, seat, f->budget);
    const SoundnessReport report = CertifySoundness(response, f->kmax, f->epsilon);
    for (size_t i = 0; i < report.k_values.size(); ++i) {
      out << "k=" << report.k_values[i] << " brv=" << FormatDouble(report.brv[i])
          << " epsilon_certified=" << FormatDouble(report.epsilon_certified[i])
          << " certified=" << (report.certified[i] ? "true" : "false") << "\n";
    }
    out << report.horizon_note << "\n";
    return 0;
  };
}

Runner SetupTabularize(CLI::App& app, std::ostream& out) {
  struct Flags {
    std::string game = "cmp";
    std::string alg;
    int player = 2;
    std::string order;
    int draws = 1;
    AlgorithmFlags algo;
    std::string out_path;
  };
  auto f = std::make_shared<Flags>();
  app.add_option("--game", f->game)->capture_default_str();
  app.add_option("--alg", f->alg, "online algorithm")->required();
  app.add_option("--player", f->player)->check(CLI::Range(1, 2))->capture_default_str();
  app.add_option("--order", f->order,
                 "comma-separated infostates, ancestors first (default: "
                 "depth-first)");
  app.add_option("--draws", f->draws, "initial-state draws")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  f->algo.Add(app);
  app.add_option("--out", f->out_path, "strategy file");
  return [f, &out] {
    std::shared_ptr<const Game> game = MakeGame(f->game);
    const GameTree tree = GameTree::Build(*game);
    const Player player = SeatOf(f->player);
    auto alg = MakeAlgorithm(f->alg, player, game, tree, f->algo);
    const auto order = f->order.empty() ? DefaultQueryOrder(tree, player)
                                        : ResolveOrder(*game, f->order);
    TabularizeOptions options;
    options.draws = f->draws;
    options.seed = f->algo.solver.seed;
    const BehavioralStrategy s = Tabularize(*alg, tree, player, order, options);
    const std::string text = FormatStrategy(player, s);
    if (f->out_path.empty()) {
      out << text;
    } else {
      WriteTextFile(f->out_path, text);
    }
    out << "exploitability="
        << FormatDouble(Exploitability(tree, CachedGameValue(*game).value,
                                       tree.ToTabular(player, s), player))
        << "\n";
    return 0;
  };
}

Runner SetupAudit(CLI::App& app, std::ostream& out) {
  struct Flags {
    std::string game = "cmp";
    std::string records;
    std::string level = "global";
    int player = 2;
    double epsilon = 0.0;
    std::string alg;
    std::vector<std::string> orders;
    int draws = 1;
    AlgorithmFlags algo;
    std::string out_path;
  };
  auto f = std::make_shared<Flags>();
  app.add_option("--game", f->game)->capture_default_str();
  app.add_option("--records", f->records,
                 "records CSV with its .queries.csv companion")
      ->required();
  app.add_option("--level", f->level)
      ->check(CLI::IsMember({"local", "global", "strong"}))
      ->capture_default_str();
  app.add_option("--player", f->player)->check(CLI::Range(1, 2))->capture_default_str();
  app.add_option("--epsilon", f->epsilon)->capture_default_str();
  app.add_option("--alg", f->alg, "audited algorithm (strong level)");
  app.add_option("--order", f->orders,
                 "strong: tabularization order, repeatable");
  app.add_option("--draws", f->draws)->check(CLI::PositiveNumber)->capture_default_str();
  f->algo.Add(app);
  app.add_option("--out", f->out_path, "report CSV");
  return [f, &out] {
    std::shared_ptr<const Game> game = MakeGame(f->game);
    const GameTree tree = GameTree::Build(*game);
    const auto records = ReadRecords(f->records);
    AuditRequest request;
    request.player = SeatOf(f->player);
    request.level = f->level == "local"    ? ConsistencyLevel::kLocal
                    : f->level == "global" ? ConsistencyLevel::kGlobal
                                           : ConsistencyLevel::kStrongGlobal;
    request.epsilon = f->epsilon;
    std::unique_ptr<OnlineAlgorithm> alg;
    if (request.level == ConsistencyLevel::kStrongGlobal) {
      if (f->alg.empty()) throw UsageError("--level strong needs --alg");
      alg = MakeAlgorithm(f->alg, request.player, game, tree, f->algo);
      request.alg = alg.get();
      for (const std::string& o : f->orders) {
        request.probes.orders.push_back(ResolveOrder(*game, o));
      }
      request.probes.tabularize.draws = f->draws;
      request.probes.tabularize.seed = f->algo.solver.seed;
    }
    const ConsistencyAudit audit = Audit(records, *game, request);
    std::string csv = "measure,value\n";
    csv += "epsilon_local," + FormatDouble(audit.epsilon_local) + "\n";
    if (audit.has_global) {
      csv += "epsilon_global," + FormatDouble(audit.epsilon_global) + "\n";
    }
    if (audit.has_strong) {
      csv += "epsilon_strong_global," + FormatDouble(audit.epsilon_strong) + "\n";
    }
    csv += "uncertainty," + FormatDouble(audit.uncertainty) + "\n";
    csv += "level_achieved," + LevelName(audit.level_achieved) + "\n";
    if (!f->out_path.empty()) WriteTextFile(f->out_path, csv);
    out << csv;
    if (!audit.witness.empty()) out << "witness: " << audit.witness << "\n";
    return 0;
  };
}

Runner SetupExperiment(CLI::App& app, std::ostream& out) {
  struct Flags {
    std::string game = "cmp";
    SolverFlags solver;
    int seeds = 1000;
    std::vector<int64_t> checkpoints;
    std::vector<std::string> targets;
    int jobs = 1;
    std::string out_path;
  };
  auto f = std::make_shared<Flags>();
  f->solver.iters = 1000000;
  app.add_option("--game", f->game, "cmp and kuhn have preset targets")
      ->capture_default_str();
  f->solver.Add(app);
  app.add_option("--seeds", f->seeds)->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--checkpoints", f->checkpoints,
                 "iterations to record (default: powers of ten)")
      ->delimiter(',');
  app.add_option("--target", f->targets,
                 "<infostate>[@<alpha>], repeatable; replaces the preset");
  app.add_option("--jobs", f->jobs)->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--out", f->out_path, "CSV iteration,seed,curve,exploitability");
  return [f, &out] {
    ExperimentConfig config;
    config.game = f->game;
    config.solver = f->solver.Config();
    config.master_seed = f->solver.seed;
    config.seeds = f->seeds;
    config.checkpoints = f->checkpoints;
    config.jobs = f->jobs;
    for (const std::string& t : f->targets) {
      auto [name, alpha] = SplitAt(t);
      config.targets.push_back({name, alpha});
    }
    ExperimentReport report;
    if (f->game == "cmp") {
      report = ExperimentOosCmp(config);
    } else if (f->game == "kuhn") {
      report = ExperimentOosKuhn(config);
    } else {
      report = RunExperiment(*MakeGame(f->game), config);
    }
    const std::string csv = report.ToCsv();
    if (f->out_path.empty()) {
      out << csv;
    } else {
      WriteTextFile(f->out_path, csv);
      for (const ExperimentRow& row : report.rows) {
        if (row.seed < 0) {
          out << row.iteration << " " << row.curve << " "
              << FormatDouble(row.exploitability) << "\n";
        }
      }
    }
    return 0;
  };
}

}  // namespace

int RunSubcommand(const std::vector<std::string>& args, std::ostream& out,
                  std::ostream& err) {
  if (args.empty()) {
    err << kUsage;
    return 2;
  }
  const std::string& name = args[0];
  if (name == "--help" || name == "-h") {
    out << kUsage;
    return 0;
  }
  const std::map<std::string, Runner (*)(CLI::App&, std::ostream&)> setups = {
      {"solve", SetupSolve},           {"exploit", SetupExploit},
      {"arena", SetupArena},           {"response-game", SetupResponseGame},
      {"tabularize", SetupTabularize}, {"audit", SetupAudit},
      {"experiment", SetupExperiment}};
  const auto it = setups.find(name);
  if (it == setups.end()) {
    err << "unknown subcommand '" << name << "'\n" << kUsage;
    return 2;
  }
  CLI::App app("soundlab " + name, "soundlab " + name);
  app.set_config("--config", "",
                 "key=value file; command-line flags take precedence");
  const Runner run = it->second(app, out);
  std::vector<std::string> rest(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "soundlab " << name << ": " << e.what() << "\n";
    return 2;
  }
  try {
    return run();
  } catch (const UsageError& e) {
    err << "soundlab " << name << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "soundlab " << name << ": error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace soundlab
