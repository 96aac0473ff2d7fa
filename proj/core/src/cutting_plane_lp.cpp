// Copyright 2026 The boxbai Authors
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

#include "cutting_plane_lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace boxbai::detail {

namespace {

constexpr double kPivotEps = 1e-12;

}  // namespace

GameSolution solve_nonnegative_game(const std::vector<std::vector<double>>& cuts,
                                    std::size_t num_boxes) {
  GameSolution out;
  const std::size_t rows = num_boxes;
  const std::size_t num_cuts = cuts.size();
  if (rows == 0 || num_cuts == 0) return out;

  double scale = 0.0;
  for (const auto& c : cuts) {
    for (double v : c) scale = std::max(scale, v);
  }
  if (!(scale > 0.0)) return out;

  // Columns: y_0..y_{J-1}, slacks s_0..s_{M-1}, rhs.
  const std::size_t cols = num_cuts + rows + 1;
  const std::size_t rhs = cols - 1;
  std::vector<double> tab((rows + 1) * cols, 0.0);
  auto at = [&](std::size_t r, std::size_t c) -> double& { return tab[r * cols + c]; };

  for (std::size_t m = 0; m < rows; ++m) {
    for (std::size_t j = 0; j < num_cuts; ++j) at(m, j) = cuts[j][m] / scale;
    at(m, num_cuts + m) = 1.0;
    at(m, rhs) = 1.0;
  }
  for (std::size_t j = 0; j < num_cuts; ++j) at(rows, j) = -1.0;

  std::vector<std::size_t> basis(rows);
  for (std::size_t m = 0; m < rows; ++m) basis[m] = num_cuts + m;

  // Bland's rule: small tableaux, and it cannot cycle.
  const std::size_t max_pivots = 50 * (rows + num_cuts) + 100;
  for (std::size_t pivots = 0;; ++pivots) {
    if (pivots > max_pivots) return out;
    std::size_t enter = cols;
    for (std::size_t c = 0; c < rhs; ++c) {
      if (at(rows, c) < -kPivotEps) {
        enter = c;
        break;
      }
    }
    if (enter == cols) break;

    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < rows; ++r) {
      if (at(r, enter) > kPivotEps) best_ratio = std::min(best_ratio, at(r, rhs) / at(r, enter));
    }
    std::size_t leave = rows;
    for (std::size_t r = 0; r < rows; ++r) {
      if (at(r, enter) <= kPivotEps) continue;
      if (at(r, rhs) / at(r, enter) > best_ratio + 1e-15) continue;
      if (leave == rows || basis[r] < basis[leave]) leave = r;
    }
    if (leave == rows) return out;  // unbounded: some cut is zero on every box

    const double pivot = at(leave, enter);
    for (std::size_t c = 0; c < cols; ++c) at(leave, c) /= pivot;
    for (std::size_t r = 0; r <= rows; ++r) {
      if (r == leave) continue;
      const double factor = at(r, enter);
      if (factor == 0.0) continue;
      for (std::size_t c = 0; c < cols; ++c) at(r, c) -= factor * at(leave, c);
    }
    basis[leave] = enter;
  }

  const double objective = at(rows, rhs);
  if (!(objective > 0.0)) return out;
  out.w.resize(rows);
  double total = 0.0;
  for (std::size_t m = 0; m < rows; ++m) {
    out.w[m] = std::max(0.0, at(rows, num_cuts + m));
    total += out.w[m];
  }
  if (!(total > 0.0)) return out;
  for (double& v : out.w) v /= total;
  out.value = scale / objective;
  out.ok = true;
  return out;
}

}  // namespace boxbai::detail
