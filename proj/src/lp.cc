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

#include "soundlab/lp.h"

#include <cmath>
#include <limits>

#include "soundlab/error.h"

namespace soundlab {
namespace {

// Dense tableau over standard-form columns. Row m is the objective.
class Tableau {
 public:
  Tableau(int rows, int cols)
      : rows_(rows), cols_(cols), a_((rows + 1) * (cols + 1), 0.0),
        basis_(rows, -1) {}

  double& at(int r, int c) { return a_[r * (cols_ + 1) + c]; }
  double& rhs(int r) { return at(r, cols_); }
  std::vector<int>& basis() { return basis_; }

  void Pivot(int pr, int pc) {
    const double inv = 1.0 / at(pr, pc);
    for (int c = 0; c <= cols_; ++c) at(pr, c) *= inv;
    for (int r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (int c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
    }
    basis_[pr] = pc;
  }

  // Minimizes the objective row over columns with allowed[c]. Returns false
  // when unbounded.
  bool Optimize(const std::vector<bool>& allowed, double tol) {
    for (int guard = 0; guard < 100000; ++guard) {
      int pc = -1;
      for (int c = 0; c < cols_; ++c) {
        if (allowed[c] && at(rows_, c) < -tol) {
          pc = c;  // Bland: first improving column.
          break;
        }
      }
      if (pc < 0) return true;
      int pr = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < rows_; ++r) {
        if (at(r, pc) > tol) {
          const double ratio = rhs(r) / at(r, pc);
          if (ratio < best - tol ||
              (ratio <= best + tol && pr >= 0 && basis_[r] < basis_[pr])) {
            best = ratio;
            pr = r;
          }
        }
      }
      if (pr < 0) return false;
      Pivot(pr, pc);
    }
    throw NumericalError("simplex did not terminate");
  }

 private:
  int rows_;
  int cols_;
  std::vector<double> a_;
  std::vector<int> basis_;
};

}  // namespace

int LinearProgram::AddVariable(double cost, bool free) {
  cost_.push_back(cost);
  free_.push_back(free);
  return static_cast<int>(cost_.size()) - 1;
}

void LinearProgram::AddConstraint(const Terms& terms, Sense sense, double rhs) {
  for (const auto& [var, coef] : terms) {
    if (var < 0 || var >= num_variables()) {
      throw RangeError("constraint names an unknown variable");
    }
    (void)coef;
  }
  rows_.push_back({terms, sense, rhs});
}

LinearProgram::Solution LinearProgram::Solve(double tol) const {
  // Columns: x+ for every variable, x- for free ones, one slack per
  // inequality, one artificial per row.
  const int n = num_variables();
  const int m = static_cast<int>(rows_.size());
  std::vector<int> neg(n, -1);
  int cols = n;
  for (int j = 0; j < n; ++j) {
    if (free_[j]) neg[j] = cols++;
  }
  std::vector<int> slack(m, -1);
  for (int r = 0; r < m; ++r) {
    if (rows_[r].sense != Sense::kEqual) slack[r] = cols++;
  }
  const int first_artificial = cols;
  cols += m;

  Tableau t(m, cols);
  for (int r = 0; r < m; ++r) {
    const double sign = rows_[r].rhs < 0.0 ? -1.0 : 1.0;
    for (const auto& [var, coef] : rows_[r].terms) {
      t.at(r, var) += sign * coef;
      if (neg[var] >= 0) t.at(r, neg[var]) -= sign * coef;
    }
    if (slack[r] >= 0) {
      t.at(r, slack[r]) =
          sign * (rows_[r].sense == Sense::kGreaterEqual ? -1.0 : 1.0);
    }
    t.at(r, first_artificial + r) = 1.0;
    t.rhs(r) = sign * rows_[r].rhs;
    t.basis()[r] = first_artificial + r;
  }

  // Phase one: drive the artificials out.
  for (int c = 0; c <= cols; ++c) {
    double s = 0.0;
    for (int r = 0; r < m; ++r) s += t.at(r, c);
    t.at(m, c) = c >= first_artificial && c < cols ? 0.0 : -s;
  }
  std::vector<bool> allowed(cols, true);
  t.Optimize(allowed, tol);
  if (-t.rhs(m) > 1e-7) throw NumericalError("linear program is infeasible");
  for (int r = 0; r < m; ++r) {
    if (t.basis()[r] < first_artificial) continue;
    for (int c = 0; c < first_artificial; ++c) {
      if (std::abs(t.at(r, c)) > tol) {
        t.Pivot(r, c);
        break;
      }
    }
  }
  for (int c = first_artificial; c < cols; ++c) allowed[c] = false;

  // Phase two.
  for (int c = 0; c <= cols; ++c) t.at(m, c) = 0.0;
  for (int j = 0; j < n; ++j) {
    t.at(m, j) = cost_[j];
    if (neg[j] >= 0) t.at(m, neg[j]) = -cost_[j];
  }
  for (int r = 0; r < m; ++r) {
    const int b = t.basis()[r];
    const double f = t.at(m, b);
    if (f == 0.0) continue;
    for (int c = 0; c <= cols; ++c) t.at(m, c) -= f * t.at(r, c);
  }
  if (!t.Optimize(allowed, tol)) {
    throw NumericalError("linear program is unbounded");
  }

  std::vector<double> column(cols, 0.0);
  for (int r = 0; r < m; ++r) column[t.basis()[r]] = t.rhs(r);
  Solution sol;
  sol.x.resize(n);
  for (int j = 0; j < n; ++j) {
    sol.x[j] = column[j] - (neg[j] >= 0 ? column[neg[j]] : 0.0);
    sol.objective += cost_[j] * sol.x[j];
  }
  return sol;
}

}  // namespace soundlab
