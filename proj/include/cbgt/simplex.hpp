// Copyright 2026 The Authors.
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

#pragma once

#include <cstddef>
#include <vector>

#include "cbgt/errors.hpp"
#include "cbgt/rational.hpp"

namespace cbgt {

struct LpSolution {
  Rational objective;
  std::vector<Rational> primal;  // y
  std::vector<Rational> dual;    // one per constraint row
  int pivots = 0;
};

/// max c.y  s.t.  A y <= b, y >= 0, with b >= 0 so the slack basis is
/// feasible. Dense tableau in exact arithmetic, Bland's rule on both the
/// entering and the leaving variable.
inline LpSolution simplex_max(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& b,
                              const std::vector<Rational>& c) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();
  if (b.size() != m) throw DomainError("simplex: row count mismatch");
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i].size() != n) throw DomainError("simplex: column count mismatch");
    if (b[i] < 0) throw DomainError("simplex: negative right-hand side");
  }
  const std::size_t cols = n + m;
  std::vector<std::vector<Rational>> t(m, std::vector<Rational>(cols));
  std::vector<Rational> rhs(b);
  std::vector<std::size_t> basic(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n + i] = 1;
    basic[i] = n + i;
  }
  // Reduced costs c_j - c_B B^-1 A_j; the objective value is tracked apart.
  std::vector<Rational> r(cols);
  for (std::size_t j = 0; j < n; ++j) r[j] = c[j];
  Rational z = 0;

  LpSolution sol;
  while (true) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j) {
      if (r[j] > 0) {
        enter = j;
        break;
      }
    }
    if (enter == cols) break;
    std::size_t leave = m;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      Rational ratio = rhs[i] / t[i][enter];
      if (leave == m || ratio < best || (ratio == best && basic[i] < basic[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) throw InstanceError("simplex: unbounded objective");
    Rational piv = t[leave][enter];
    for (auto& v : t[leave]) v /= piv;
    rhs[leave] /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      Rational f = t[i][enter];
      for (std::size_t j = 0; j < cols; ++j) {
        if (t[leave][j] != 0) t[i][j] -= f * t[leave][j];
      }
      rhs[i] -= f * rhs[leave];
    }
    Rational f = r[enter];
    for (std::size_t j = 0; j < cols; ++j) {
      if (t[leave][j] != 0) r[j] -= f * t[leave][j];
    }
    z += f * rhs[leave];
    basic[leave] = enter;
    ++sol.pivots;
  }
  sol.objective = z;
  sol.primal.assign(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    if (basic[i] < n) sol.primal[basic[i]] = rhs[i];
  }
  sol.dual.resize(m);
  for (std::size_t i = 0; i < m; ++i) sol.dual[i] = -r[n + i];
  return sol;
}

}  // namespace cbgt
