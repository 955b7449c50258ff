// Copyright 2026 The lw-lab Authors.
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

#include "lwlab/simplex.hpp"

#include <cmath>

#include "lwlab/common.hpp"

namespace lwlab {

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-10;
constexpr int kMaxIterations = 100000;

}  // namespace

LpResult maximize(const LinearProgram& lp) {
  const int nv = static_cast<int>(lp.objective.size());
  const int rows = static_cast<int>(lp.constraints.size());
  if (static_cast<int>(lp.rhs.size()) != rows) throw InputError("rhs size mismatch");
  if (!lp.upper.empty() && static_cast<int>(lp.upper.size()) != nv) {
    throw InputError("upper bound size mismatch");
  }
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(lp.constraints[r].size()) != nv) {
      throw InputError("constraint row size mismatch");
    }
    if (lp.rhs[r] < 0.0) throw InputError("rhs must be nonnegative");
  }

  // Columns: structural variables then one slack per row.
  const int total = nv + rows;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> upper(total, inf);
  for (int j = 0; j < nv; ++j) {
    if (!lp.upper.empty()) {
      if (lp.upper[j] < 0.0) throw InputError("upper bounds must be nonnegative");
      upper[j] = lp.upper[j];
    }
  }
  std::vector<std::vector<double>> t(rows, std::vector<double>(total, 0.0));
  for (int r = 0; r < rows; ++r) {
    for (int j = 0; j < nv; ++j) t[r][j] = lp.constraints[r][j];
    t[r][nv + r] = 1.0;
  }
  std::vector<double> beta = lp.rhs;
  std::vector<double> d(total, 0.0);
  for (int j = 0; j < nv; ++j) d[j] = lp.objective[j];
  std::vector<int> basis(rows);
  std::vector<int> row_of(total, -1);
  for (int r = 0; r < rows; ++r) {
    basis[r] = nv + r;
    row_of[nv + r] = r;
  }
  std::vector<bool> at_upper(total, false);

  LpResult res;
  while (true) {
    if (++res.iterations > kMaxIterations) throw InternalError("simplex iteration limit");
    int enter = -1;
    for (int j = 0; j < total; ++j) {
      if (row_of[j] >= 0 || upper[j] <= kPivotEps) continue;
      if ((!at_upper[j] && d[j] > kCostEps) || (at_upper[j] && d[j] < -kCostEps)) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    const double dir = at_upper[enter] ? -1.0 : 1.0;

    double step = upper[enter];
    int leave = -1;
    bool leave_to_upper = false;
    for (int r = 0; r < rows; ++r) {
      double a = dir * t[r][enter];
      double limit;
      bool to_upper;
      if (a > kPivotEps) {
        limit = std::max(0.0, beta[r]) / a;
        to_upper = false;
      } else if (a < -kPivotEps && std::isfinite(upper[basis[r]])) {
        limit = std::max(0.0, upper[basis[r]] - beta[r]) / -a;
        to_upper = true;
      } else {
        continue;
      }
      bool better = limit < step - kPivotEps;
      bool tie = !better && limit <= step + kPivotEps && leave >= 0 &&
                 basis[r] < basis[leave];
      if (better || tie) {
        step = limit;
        leave = r;
        leave_to_upper = to_upper;
      }
    }
    if (!std::isfinite(step)) throw InternalError("linear program is unbounded");

    for (int r = 0; r < rows; ++r) beta[r] -= dir * step * t[r][enter];
    if (leave < 0) {
      at_upper[enter] = !at_upper[enter];
      continue;
    }
    double entered_value = (at_upper[enter] ? upper[enter] : 0.0) + dir * step;
    int out = basis[leave];
    row_of[out] = -1;
    at_upper[out] = leave_to_upper;
    at_upper[enter] = false;

    double piv = t[leave][enter];
    for (int j = 0; j < total; ++j) t[leave][j] /= piv;
    for (int r = 0; r < rows; ++r) {
      if (r == leave) continue;
      double f = t[r][enter];
      if (f == 0.0) continue;
      for (int j = 0; j < total; ++j) t[r][j] -= f * t[leave][j];
    }
    double f = d[enter];
    for (int j = 0; j < total; ++j) d[j] -= f * t[leave][j];
    basis[leave] = enter;
    row_of[enter] = leave;
    beta[leave] = entered_value;
  }

  res.x.assign(nv, 0.0);
  for (int j = 0; j < nv; ++j) {
    if (row_of[j] >= 0) {
      res.x[j] = beta[row_of[j]];
    } else if (at_upper[j]) {
      res.x[j] = upper[j];
    }
  }
  for (int j = 0; j < nv; ++j) res.objective += lp.objective[j] * res.x[j];
  return res;
}

}  // namespace lwlab
