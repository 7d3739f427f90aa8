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


#ifndef SOUNDLAB_EXPERIMENTS_H_
#define SOUNDLAB_EXPERIMENTS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "soundlab/fosg.h"
#include "soundlab/solvers.h"

namespace soundlab {

struct BiasTarget {
  std::string infostate;  // Name alias or canonical key.
  // Kickstart parameter of the game's equilibrium family; none skips the
  // kickstart for this run.
  std::optional<double> alpha;
};

// Emulated online outcome sampling: one MCCFR run per bias target plus an
// unbiased, unkickstarted reference, repeated over seeds. The solver's
// bias_targets and seed are overwritten per run.
struct ExperimentConfig {
  std::string game = "cmp";
  SolverConfig solver;
  int seeds = 1000;
  uint64_t master_seed = 0;
  // Empty means solver.EffectiveCheckpoints(). A leading 0 records the
  // initial (uniform) average strategies.
  std::vector<int64_t> checkpoints;
  std::vector<BiasTarget> targets;
  int jobs = 1;

  // Throws RangeError.
  void Validate() const;
  std::vector<int64_t> EffectiveCheckpoints() const;
};

// Solver defaults of the OOS emulation at one million iterations.
ExperimentConfig DefaultOosConfig(const std::string& game);

struct ExperimentRow {
  int64_t iteration = 0;
  int seed = -1;  // Seed index; -1 for the across-seed row.
  std::string curve;  // "biased:<target>", "tabularized" or "unbiased".
  double exploitability = 0.0;
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;

  // Header `iteration,seed,curve,exploitability`, seed "mean" on
  // across-seed rows, floats with 17 significant digits.
  std::string ToCsv() const;
  // Across-seed value of `curve` at `iteration`. Throws RangeError.
  double Mean(const std::string& curve, int64_t iteration) const;
};

// Runs the configured experiment. Exploitability is that of the player who
// owns the targets. The tabularized strategy answers each infostate with
// the run biased toward it or toward its nearest targeted ancestor (the
// first target's run elsewhere). Across-seed rows score the mixture of the
// per-seed strategies, i.e. the expected answer of the randomized online
// algorithm, combined by the player's own reach.
ExperimentReport RunExperiment(const Game& game, const ExperimentConfig& config);

// CMP with targets s1 (alpha 0.5) and s2 (alpha 1) unless set in `config`.
ExperimentReport ExperimentOosCmp(ExperimentConfig config);
// Kuhn with player 1 targets J (alpha 0), Q (alpha 0.5) and K (alpha 1)
// unless set in `config`.
ExperimentReport ExperimentOosKuhn(ExperimentConfig config);

}  // namespace soundlab

#endif  // SOUNDLAB_EXPERIMENTS_H_
