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

#ifndef SOUNDLAB_CONSISTENCY_H_
#define SOUNDLAB_CONSISTENCY_H_

#include <string>
#include <vector>

#include "soundlab/arena.h"
#include "soundlab/fosg.h"
#include "soundlab/online.h"

namespace soundlab {

// Numeric error allowance of the completion linear program. Reported next to
// audit results, not folded into them.
inline constexpr double kCompletionUncertainty = 1e-6;

struct CompletionOptions {
  int max_unfilled = 6;
};

struct Completion {
  double exploitability = 0.0;
  BehavioralStrategy strategy;  // The completed strategy.
};

// Smallest exploitability over strategies of partial.player that agree with
// the partial strategy where it is defined. Pinning behavior at an infoset is
// linear in sequence form, so this is the sequence-form minimax program with
// extra equality rows; the completion it returns is re-scored with the exact
// best response. Throws BudgetExceededError beyond `max_unfilled` free
// infosets.
Completion CompletionExploitability(const Game& game,
                                    const PartialStrategy& partial,
                                    const CompletionOptions& options = {});

struct AuditResult {
  double epsilon = 0.0;
  std::string witness;  // Empty unless something notable was found.
};

// max over logged queries of `player` of the completion exploitability of
// that single answer.
AuditResult AuditLocal(const std::vector<RepeatedGameRecord>& records,
                       const Game& game, Player player,
                       const CompletionOptions& options = {});

// Per gameplay and per match prefix, the answers so far merged into one
// partial strategy; max of their completion exploitabilities. Two different
// answers in one infostate give the utility range, with a witness.
AuditResult AuditGlobal(const std::vector<RepeatedGameRecord>& records,
                        const Game& game, Player player,
                        const CompletionOptions& options = {});

struct StrongProbes {
  std::vector<std::vector<std::string>> orders;  // Tabularization orders.
  std::vector<RepeatedGameRecord> rollouts;      // Logged gameplays.
  TabularizeOptions tabularize;
};

// Every probe must produce the same strategy; the result is its
// exploitability, or the utility range with a witness when two probes
// disagree.
AuditResult AuditStrongGlobal(const OnlineAlgorithm& alg, const Game& game,
                              Player player, const StrongProbes& probes);

enum class ConsistencyLevel { kNone, kLocal, kGlobal, kStrongGlobal };
std::string LevelName(ConsistencyLevel level);

struct ConsistencyAudit {
  ConsistencyLevel level_achieved = ConsistencyLevel::kNone;
  double epsilon_local = 0.0;
  double epsilon_global = 0.0;
  double epsilon_strong = 0.0;
  bool has_global = false;
  bool has_strong = false;
  double uncertainty = kCompletionUncertainty;
  std::string witness;
};

struct AuditRequest {
  Player player = kPlayer1;
  ConsistencyLevel level = ConsistencyLevel::kGlobal;
  // Levels count as achieved when their epsilon is at most this plus the
  // uncertainty band.
  double epsilon = 0.0;
  // Needed for the strong level; the audited records are added as rollouts.
  const OnlineAlgorithm* alg = nullptr;
  StrongProbes probes;
};

ConsistencyAudit Audit(const std::vector<RepeatedGameRecord>& records,
                       const Game& game, const AuditRequest& request);

}  // namespace soundlab

#endif  // SOUNDLAB_CONSISTENCY_H_
