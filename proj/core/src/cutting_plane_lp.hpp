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

#ifndef BOXBAI_SRC_CUTTING_PLANE_LP_HPP
#define BOXBAI_SRC_CUTTING_PLANE_LP_HPP

#include <cstddef>
#include <vector>

namespace boxbai::detail {

struct GameSolution {
  double value = 0.0;
  std::vector<double> w;
  bool ok = false;
};

/// Value and maximizing mixture of the finite game
///   max over w in the simplex of min_j <cuts[j], w>
/// for non-negative cut vectors, each with at least one positive entry.
/// Solved as the LP  max sum(y) s.t. sum_j y_j cuts[j] <= 1, y >= 0, whose
/// optimum is 1 / value and whose dual prices are w / value.
GameSolution solve_nonnegative_game(const std::vector<std::vector<double>>& cuts,
                                    std::size_t num_boxes);

}  // namespace boxbai::detail

#endif  // BOXBAI_SRC_CUTTING_PLANE_LP_HPP
