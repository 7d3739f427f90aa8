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

#ifndef SOUNDLAB_LP_H_
#define SOUNDLAB_LP_H_

#include <utility>
#include <vector>

namespace soundlab {

// Small dense linear programs: minimize c'x subject to linear rows, with
// x >= 0 unless a variable is declared free. Two-phase simplex with Bland's
// rule; meant for desk-scale sequence-form problems.
class LinearProgram {
 public:
  enum class Sense { kEqual, kGreaterEqual, kLessEqual };
  using Terms = std::vector<std::pair<int, double>>;

  int AddVariable(double cost, bool free = false);
  void AddConstraint(const Terms& terms, Sense sense, double rhs);

  struct Solution {
    double objective = 0.0;
    std::vector<double> x;
  };
  // Throws NumericalError when infeasible or unbounded.
  Solution Solve(double tolerance = 1e-10) const;

  int num_variables() const { return static_cast<int>(cost_.size()); }

 private:
  struct Row {
    Terms terms;
    Sense sense;
    double rhs;
  };
  std::vector<double> cost_;
  std::vector<bool> free_;
  std::vector<Row> rows_;
};

}  // namespace soundlab

#endif  // SOUNDLAB_LP_H_
